//! Reproduction of the published tables from embedded expected values.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cusp_certify::{cusp_structure_for, kodaira_lower_bound, Certifier, Level, ModularGroup, Verdict};
use cusp_cone::{reducers, trace_minimal_cone};
use cusp_defects::defect_polyhedra;
use cusp_field::{parse_rational, Rat, UnitSubgroup};
use cusp_quotsing::{quot_asymptotic_constant, quot_defect_sequence, QuotSingType};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Deserialize;

use crate::fixtures::load_field;

pub const TABLE_IDS: [&str; 7] = ["1", "2", "3", "4", "5", "6", "quotsing"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub id: String,
    pub title: String,
    pub kind: String,
    #[serde(default)]
    pub cusp: Vec<CuspRow>,
    #[serde(default)]
    pub kodaira: Vec<KodairaRow>,
    #[serde(default)]
    pub quotsing: Vec<QuotRow>,
}

/// One row of a cusp-constant table; `n`, `t`, `t_prime` are informational.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspRow {
    pub field: String,
    pub genus: String,
    pub z: String,
    pub c: String,
    pub h_plus: Option<u64>,
    pub r: usize,
    pub n: Option<usize>,
    pub t: Option<String>,
    pub t_prime: Option<String>,
    pub verdict: String,
    pub cite: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KodairaRow {
    pub field: String,
    pub level: String,
    pub group: Option<String>,
    pub kappa: i64,
    pub weight: u32,
    pub dim: u64,
    pub defect_sum: u64,
    pub cite: String,
}

/// Either an explicit type, or a sweep over every type of one order and dimension.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotRow {
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub sweep_order: Option<u64>,
    pub sweep_dim: Option<usize>,
    pub terms: u32,
    pub sequence: Option<Vec<u64>>,
    pub constant: Option<String>,
    pub cite: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCheck {
    pub column: String,
    pub expected: String,
    pub computed: String,
    /// Informational columns are reported but never compared.
    pub compared: bool,
    pub cite: String,
}

impl CellCheck {
    pub fn ok(&self) -> bool {
        !self.compared || self.expected == self.computed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCheck {
    pub label: String,
    pub cells: Vec<CellCheck>,
    pub error: Option<String>,
}

impl RowCheck {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.cells.iter().all(CellCheck::ok)
    }

    pub fn cell(&self, column: &str) -> Option<&CellCheck> {
        self.cells.iter().find(|c| c.column == column)
    }
}

#[derive(Clone, Debug)]
pub struct TableReport {
    pub id: String,
    pub title: String,
    pub rows: Vec<RowCheck>,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(RowCheck::ok)
    }

    pub fn row(&self, label: &str) -> Option<&RowCheck> {
        self.rows.iter().find(|r| r.label == label)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let tag = if r.ok() { "ok  " } else { "FAIL" };
            let cells: Vec<String> = r
                .cells
                .iter()
                .map(|c| if c.compared { format!("{} {}", c.column, c.computed) } else { format!("[{} {}]", c.column, c.computed) })
                .collect();
            writeln!(f, "{tag} {:<28} {}", r.label, cells.join("  "))?;
            if let Some(e) = &r.error {
                writeln!(f, "     error: {e}")?;
            }
            for c in r.cells.iter().filter(|c| !c.ok()) {
                writeln!(f, "     {}: expected {}, computed {}  ({})", c.column, c.expected, c.computed, c.cite)?;
            }
        }
        let bad = self.rows.iter().filter(|r| !r.ok()).count();
        if bad == 0 {
            write!(f, "{}: {} rows matched", self.title, self.rows.len())
        } else {
            write!(f, "{}: {} of {} rows differ", self.title, bad, self.rows.len())
        }
    }
}

pub fn load_table(dir: &Path, id: &str) -> Result<TableFile> {
    let name = if id == "quotsing" { "quotsing".to_string() } else { format!("table{id}") };
    let path = dir.join("tables").join(format!("{name}.toml"));
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let t: TableFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if t.id != id {
        bail!("{} declares id {:?}", path.display(), t.id);
    }
    Ok(t)
}

pub fn reproduce(dir: &Path, id: &str) -> Result<TableReport> {
    let t = load_table(dir, id)?;
    let rows = match t.kind.as_str() {
        "cusp" => t.cusp.par_iter().map(|r| guard(&r.field, || cusp_row(dir, r))).collect(),
        "kodaira" => t.kodaira.par_iter().map(|r| guard(&r.field, || kodaira_row(r))).collect(),
        "quotsing" => t
            .quotsing
            .par_iter()
            .map(|r| guard(r.ty.as_deref().unwrap_or("sweep"), || quot_row(r)))
            .collect(),
        k => bail!("unknown table kind {k:?}"),
    };
    Ok(TableReport { id: t.id, title: t.title, rows })
}

fn guard(label: &str, f: impl FnOnce() -> Result<RowCheck>) -> RowCheck {
    f().unwrap_or_else(|e| RowCheck { label: label.into(), cells: Vec::new(), error: Some(format!("{e:#}")) })
}

fn cell(column: &str, expected: impl ToString, computed: impl ToString, cite: &str) -> CellCheck {
    CellCheck {
        column: column.into(),
        expected: expected.to_string(),
        computed: computed.to_string(),
        compared: true,
        cite: format!("{cite}, column {column}"),
    }
}

fn info(column: &str, expected: impl ToString, computed: impl ToString, cite: &str) -> CellCheck {
    CellCheck { compared: false, ..cell(column, expected, computed, cite) }
}

fn norm_rat(s: &str) -> Result<String> {
    Ok(parse_rational(s)?.to_string())
}

/// `z` and `c = sum c_{M, O^x2}` over the level-one cusps of the genus, with `O^x2`
/// the `PSL_2` normalization that `z` uses; `r` counts reducers over those cusps.
fn cusp_row(dir: &Path, row: &CuspRow) -> Result<RowCheck> {
    let k = load_field(&row.field, dir)?;
    let level = Level::one(&k);
    let cusps = cusp_structure_for(&k, &row.genus, &level.ideal, ModularGroup::Sl2)?;
    let cone = trace_minimal_cone(&k, &UnitSubgroup::full(&k))?;
    let cert = Certifier::with_cone(&k, cone.clone());
    let mut r = 0;
    let mut n = 0;
    let mut c = Rat::from_integer(0.into());
    for lc in &cusps {
        let red = reducers(&k, &cone, &lc.cusp.m)?;
        let poly = defect_polyhedra(&k, &cone, &red)?;
        r += red.len();
        n += poly.nonredundant();
        cert.seed_constant(&lc.cusp.m, poly.union.volume.clone())?;
        c += &poly.union.volume * Rat::from_integer(lc.unit_index.into());
    }
    let certificate = cert.asymptotic_certificate_for(&row.genus, &level, &cusps, ModularGroup::Sl2)?;
    let z = certificate.input("z").cloned().unwrap_or_else(|| Rat::from_integer(0.into()));
    let mut cells = vec![cell("z", norm_rat(&row.z)?, &z, &row.cite), cell("c", norm_rat(&row.c)?, &c, &row.cite)];
    if let Some(h) = row.h_plus {
        cells.push(cell("h+", h, k.narrow_class_number(), &row.cite));
    }
    cells.push(cell("r", row.r, r, &row.cite));
    cells.push(cell("verdict", &row.verdict, certificate.verdict, &row.cite));
    cells.push(info("n", row.n.map_or("-".into(), |x| x.to_string()), n, &row.cite));
    if let Some(t) = &row.t {
        cells.push(info("t", t, "-", &row.cite));
    }
    Ok(RowCheck { label: format!("{} {}", row.field, row.genus), cells, error: None })
}

fn kodaira_row(row: &KodairaRow) -> Result<RowCheck> {
    let cert = kodaira_lower_bound(
        &row.field,
        "principal",
        &row.level,
        &[(row.weight, row.dim)],
        &[(row.weight, row.defect_sum)],
        &row.cite,
    )?;
    let kappa = match cert.verdict {
        Verdict::KappaAtLeastOne | Verdict::GeneralType => 1,
        Verdict::KappaAtLeastZero => 0,
        Verdict::Inconclusive => -1,
    };
    let bound = &cert.lhs - &cert.rhs;
    let group = row.group.as_deref().unwrap_or("");
    let cells = vec![
        cell("bound", row.dim as i64 - row.defect_sum as i64, bound, &row.cite),
        cell("kappa>=", row.kappa, kappa, &row.cite),
    ];
    Ok(RowCheck { label: format!("{} {} {}", row.field, row.level, group).trim_end().into(), cells, error: None })
}

fn quot_row(row: &QuotRow) -> Result<RowCheck> {
    if let Some(ty) = &row.ty {
        let t = parse_quot_type(ty)?;
        let seq = quot_defect_sequence(&t, row.terms)?;
        let mut cells = Vec::new();
        if let Some(exp) = &row.sequence {
            cells.push(cell("sequence", join(exp), join(&seq), &row.cite));
        }
        if let Some(exp) = &row.constant {
            cells.push(cell("constant", norm_rat(exp)?, quot_asymptotic_constant(&t)?, &row.cite));
        }
        return Ok(RowCheck { label: format!("({})", ty.trim().trim_start_matches('(').trim_end_matches(')')), cells, error: None });
    }
    let (Some(m), Some(dim)) = (row.sweep_order, row.sweep_dim) else {
        bail!("quotsing row needs a type or a sweep");
    };
    let mut nonzero = Vec::new();
    let mut count = 0;
    for w in weight_tuples(m, dim) {
        let t = QuotSingType::new(&w, m)?;
        count += 1;
        if quot_defect_sequence(&t, row.terms)?.iter().any(|&d| d != 0) {
            nonzero.push(t.to_string());
        }
    }
    let cells = vec![
        cell("nonzero types", "none", if nonzero.is_empty() { "none".into() } else { nonzero.join(" ") }, &row.cite),
        info("types checked", "-", count, &row.cite),
    ];
    Ok(RowCheck { label: format!("all order-{m} types, dim {dim}"), cells, error: None })
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `a_1,...,a_n;m`, optionally in parentheses.
pub fn parse_quot_type(s: &str) -> Result<QuotSingType> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (w, m) = s.split_once(';').with_context(|| format!("expected a1,...,an;m, got {s:?}"))?;
    let weights = w.split(',').map(|x| x.trim().parse::<u64>()).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(QuotSingType::new(&weights, m.trim().parse()?)?)
}

/// Nondecreasing tuples of weights in `1..m` coprime to `m`.
fn weight_tuples(m: u64, dim: usize) -> Vec<Vec<u64>> {
    let units: Vec<u64> = (1..m).filter(|a| a.gcd(&m) == 1).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u64>| {
                let lo = t.last().copied().unwrap_or(0);
                units.iter().filter(move |&&a| a >= lo).map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

