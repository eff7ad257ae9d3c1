use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Result};
use cusp_certify::{
    cusp_structure_for, explicit_cusp_structure, kodaira_lower_bound, Certificate, Certifier, Criterion, ExplicitCusp,
    Level, LevelCusp, ModularGroup,
};
use cusp_cone::{reducers, trace_minimal_cone};
use cusp_defects::{defect_polyhedra, defect_sequence_with_cone};
use cusp_field::{FieldElement, NumberField, Rat, UnitSubgroup};
use cusp_quotsing::elliptic_constant_e_i;
use serde::{Deserialize, Serialize};

use crate::level::{parse_ideal, parse_level};

pub const TOOL: &str = "cusp-toolkit";

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub genus: String,
    pub level: Option<String>,
    pub upto_q: Option<u32>,
    pub group: ModularGroup,
    /// `modulus[:index]` per cusp, for levels without an automatic cusp structure.
    pub cusps: Vec<String>,
    pub dump_polytopes: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            genus: "principal".into(),
            level: None,
            upto_q: None,
            group: ModularGroup::Gl2Plus,
            cusps: Vec::new(),
            dump_polytopes: false,
        }
    }
}

pub fn group_name(g: ModularGroup) -> &'static str {
    match g {
        ModularGroup::Gl2Plus => "gl2plus",
        ModularGroup::Sl2 => "sl2",
    }
}

pub fn parse_group(s: &str) -> Result<ModularGroup> {
    match s.to_ascii_lowercase().replace(['_', '-', '+'], "").as_str() {
        "gl2plus" | "gl2" | "pgl2" | "pgl2plus" => Ok(ModularGroup::Gl2Plus),
        "sl2" | "psl2" => Ok(ModularGroup::Sl2),
        _ => bail!("unknown group {s:?} (expected gl2plus or sl2)"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub meta: Meta,
    pub field: FieldSection,
    pub cone: ConeSection,
    pub reducers: Vec<ReducerSection>,
    pub defects: DefectSection,
    pub certificates: Vec<CertificateSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub genus: String,
    pub level: String,
    pub group: String,
    /// Wall-clock milliseconds per stage; the only nondeterministic content.
    pub timing_ms: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSection {
    pub label: String,
    pub degree: usize,
    pub disc: String,
    pub min_poly: Vec<String>,
    pub class_number: u64,
    pub narrow_class_number: u64,
    pub squares_index: u64,
    pub zeta_minus1: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSection {
    /// Extremal rays in integral-basis coordinates.
    pub rays: Vec<Vec<String>>,
    pub facets: usize,
    pub units_tried: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducerSection {
    pub cusp: usize,
    pub ideal: String,
    pub min: String,
    pub count: usize,
    pub list: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectSection {
    pub cusps: Vec<CuspSection>,
    /// Sum of `c` over the cusps.
    pub total_c: String,
    pub e_level: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspSection {
    pub ideal: String,
    /// `[O_+ : V]` for this cusp's unit group.
    pub unit_index: u64,
    pub polyhedra: usize,
    pub nonredundant: usize,
    pub union_passes: usize,
    /// `c_{M,V}`.
    pub c: String,
    pub constants: Vec<GroupConstant>,
    /// `delta(1), delta(2), ...`
    pub sequence: Option<Vec<u64>>,
    /// Vertices of each `T_r(1)` in `M^` coordinates.
    pub polytopes: Option<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConstant {
    pub group: String,
    pub index: u64,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSection {
    pub field: String,
    pub genus: String,
    pub level: String,
    pub criterion: String,
    pub verdict: String,
    pub lhs: String,
    pub rhs: String,
    pub inputs: Vec<InputSection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSection {
    pub name: String,
    pub value: String,
    pub source: String,
}

impl From<&Certificate> for CertificateSection {
    fn from(c: &Certificate) -> Self {
        CertificateSection {
            field: c.field.clone(),
            genus: c.genus.clone(),
            level: c.level.clone(),
            criterion: match c.criterion {
                Criterion::Asymptotic => "asymptotic".into(),
                Criterion::Weight { weight } => format!("weight {weight}"),
            },
            verdict: c.verdict.as_str().into(),
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            inputs: c
                .inputs
                .iter()
                .map(|i| InputSection { name: i.name.clone(), value: i.value.to_string(), source: i.source.clone() })
                .collect(),
        }
    }
}

fn coords(x: &FieldElement) -> Vec<String> {
    x.coords().iter().map(|c| c.to_string()).collect()
}

fn row(v: &[Rat]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn parse_cusp(k: &NumberField, s: &str) -> Result<ExplicitCusp> {
    let (m, idx) = match s.rsplit_once(':') {
        Some((m, i)) => (m, Some(i.trim().parse::<u64>()?)),
        None => (s, None),
    };
    Ok(ExplicitCusp { modulus: parse_ideal(k, m)?, declared_index: idx })
}

struct Timer(BTreeMap<String, u64>);

impl Timer {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f()?;
        *self.0.entry(stage.into()).or_default() += t.elapsed().as_millis() as u64;
        Ok(out)
    }
}

/// Cusps of the requested component, or an error for levels needing explicit input.
pub fn level_cusps(k: &NumberField, opts: &AnalyzeOptions, level: &Level) -> Result<Vec<LevelCusp>> {
    if !opts.cusps.is_empty() {
        let cusps = opts.cusps.iter().map(|c| parse_cusp(k, c)).collect::<Result<Vec<_>>>()?;
        return Ok(explicit_cusp_structure(k, &opts.genus, &cusps)?);
    }
    Ok(cusp_structure_for(k, &opts.genus, &level.ideal, opts.group)?)
}

/// cone -> reducers -> defect polyhedra -> constants -> certificates.
pub fn analyze(k: &NumberField, opts: &AnalyzeOptions) -> Result<RunReport> {
    let mut timer = Timer(BTreeMap::new());
    let level = match &opts.level {
        Some(s) => parse_level(k, s)?,
        None => Level::one(k),
    };
    let cusps = level_cusps(k, opts, &level)?;
    let cone = timer.time("cone", || Ok(trace_minimal_cone(k, &UnitSubgroup::full(k))?))?;
    let certifier = Certifier::with_cone(k, cone.clone());
    let squares_index = UnitSubgroup::squares(k).index();

    let mut reducer_sections = Vec::new();
    let mut cusp_sections = Vec::new();
    let mut total = Rat::from_integer(0.into());
    let mut sequences = Vec::new();
    for (i, lc) in cusps.iter().enumerate() {
        let m = &lc.cusp.m;
        let red = timer.time("reducers", || Ok(reducers(k, &cone, m)?))?;
        let poly = timer.time("union", || Ok(defect_polyhedra(k, &cone, &red)?))?;
        let full = poly.union.volume.clone();
        certifier.seed_constant(m, full.clone())?;
        let c = &full * Rat::from_integer(lc.unit_index.into());
        total += &c;
        reducer_sections.push(ReducerSection {
            cusp: i,
            ideal: m.to_string(),
            min: red.min.to_string(),
            count: red.len(),
            list: red.reducers.iter().map(coords).collect(),
        });
        let sequence = match opts.upto_q {
            Some(q) => Some(timer.time("sequence", || Ok(defect_sequence_with_cone(k, &cone, &lc.cusp, q)?))?),
            None => None,
        };
        sequences.push(sequence.clone());
        let polytopes = if opts.dump_polytopes {
            let mut out = Vec::new();
            for p in &poly.polytopes {
                out.push(p.vertices()?.iter().map(|v| row(v)).collect());
            }
            Some(out)
        } else {
            None
        };
        cusp_sections.push(CuspSection {
            ideal: m.to_string(),
            unit_index: lc.unit_index,
            polyhedra: poly.count(),
            nonredundant: poly.nonredundant(),
            union_passes: poly.union.passes,
            c: c.to_string(),
            constants: vec![
                GroupConstant { group: "O_+".into(), index: 1, c: full.to_string() },
                GroupConstant {
                    group: "O^x2".into(),
                    index: squares_index,
                    c: (&full * Rat::from_integer(squares_index.into())).to_string(),
                },
            ],
            sequence,
            polytopes,
        });
    }

    let e = elliptic_constant_e_i(k, &level.ideal)?;
    let mut certificates = Vec::new();
    if k.zeta_minus1().is_some() {
        let cert = timer.time("certificate", || {
            Ok(certifier.asymptotic_certificate_for(&opts.genus, &level, &cusps, opts.group)?)
        })?;
        certificates.push(CertificateSection::from(&cert));
    }
    if let Some(cert) = weight_certificate(k, opts, &level, &sequences, &e)? {
        certificates.push(CertificateSection::from(&cert));
    }

    let field = FieldSection {
        label: k.label().into(),
        degree: k.degree(),
        disc: k.disc().to_string(),
        min_poly: k.min_poly().iter().map(|c| c.to_string()).collect(),
        class_number: k.class_number(),
        narrow_class_number: k.narrow_class_number(),
        squares_index,
        zeta_minus1: k.zeta_minus1().map(|z| z.to_string()),
    };
    Ok(RunReport {
        meta: Meta {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            genus: opts.genus.clone(),
            level: level.label.clone(),
            group: group_name(opts.group).into(),
            timing_ms: timer.0,
        },
        field,
        cone: ConeSection {
            rays: cone.rays.iter().map(coords).collect(),
            facets: cone.halfspaces.len(),
            units_tried: cone.candidate_units.len(),
        },
        reducers: reducer_sections,
        defects: DefectSection { cusps: cusp_sections, total_c: total.to_string(), e_level: e.to_string() },
        certificates,
    })
}

/// Weight bound from ingested dimensions, when the field file carries them.
fn weight_certificate(
    k: &NumberField,
    opts: &AnalyzeOptions,
    level: &Level,
    sequences: &[Option<Vec<u64>>],
    e: &Rat,
) -> Result<Option<Certificate>> {
    let group = group_name(opts.group);
    let Some(table) = k.dim_tables().iter().find(|t| {
        t.level == level.label && t.genus == opts.genus && t.group.as_deref().map_or(true, |g| g == group)
    }) else {
        return Ok(None);
    };
    if sequences.iter().any(|s| s.is_none()) || !num_traits::Zero::is_zero(e) {
        log::info!("skipping weight bound: needs --upto-q and a level without elliptic defects");
        return Ok(None);
    }
    let mut dims = Vec::new();
    let mut defects = Vec::new();
    for &(w, d) in &table.dims {
        let q = (w / 2) as usize;
        if w % 2 != 0 || q == 0 || sequences.iter().any(|s| s.as_ref().unwrap().len() < q) {
            continue;
        }
        dims.push((w, d));
        defects.push((w, sequences.iter().map(|s| s.as_ref().unwrap()[q - 1]).sum()));
    }
    if dims.is_empty() {
        return Ok(None);
    }
    Ok(Some(kodaira_lower_bound(k.label(), &opts.genus, &level.label, &dims, &defects, &table.source)?))
}

/// The report with its timing removed, for comparisons.
pub fn without_timing(r: &RunReport) -> RunReport {
    let mut r = r.clone();
    r.meta.timing_ms.clear();
    r
}

pub fn to_structured(r: &RunReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(r)? + "\n")
}

pub fn from_structured(s: &str) -> Result<RunReport> {
    Ok(serde_json::from_str(s)?)
}

pub fn render_table(r: &RunReport) -> String {
    let mut s = String::new();
    let f = &r.field;
    let _ = writeln!(s, "field     {} (disc {}, h = {}, h+ = {})", f.label, f.disc, f.class_number, f.narrow_class_number);
    let _ = writeln!(s, "component genus {}, level {}, {}", r.meta.genus, r.meta.level, r.meta.group);
    if let Some(z) = &f.zeta_minus1 {
        let _ = writeln!(s, "zeta(-1)  {z}");
    }
    let rays: Vec<String> = r.cone.rays.iter().map(|v| format!("({})", v.join(","))).collect();
    let _ = writeln!(s, "cone      {} rays: {}", rays.len(), rays.join(" "));
    let _ = writeln!(s, "{:<5} {:>8} {:>6} {:>6} {:>7} {:>12}  ideal", "cusp", "reducers", "polys", "kept", "passes", "c");
    for (i, (c, red)) in r.defects.cusps.iter().zip(&r.reducers).enumerate() {
        let _ = writeln!(
            s,
            "{:<5} {:>8} {:>6} {:>6} {:>7} {:>12}  {}",
            i, red.count, c.polyhedra, c.nonredundant, c.union_passes, c.c, c.ideal
        );
        if red.count > 0 && red.count <= 8 {
            let list: Vec<String> = red.list.iter().map(|v| format!("({})", v.join(","))).collect();
            let _ = writeln!(s, "      reducers {}", list.join(" "));
        }
        if let Some(seq) = &c.sequence {
            let seq: Vec<String> = seq.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "      defects  {}", seq.join(", "));
        }
    }
    let _ = writeln!(s, "total c   {}", r.defects.total_c);
    for c in &r.certificates {
        let _ = writeln!(s, "certify   [{}] {} vs {} -> {}", c.criterion, c.lhs, c.rhs, c.verdict);
    }
    s
}
