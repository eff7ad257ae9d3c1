use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Deserialize;

use crate::field::{DimTable, FieldData};
use crate::{FieldError, NumberField, Rat, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealSpec {
    label: String,
    basis: Vec<Vec<i64>>,
    #[serde(default = "one")]
    denom: i64,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimSpec {
    level: String,
    genus: String,
    #[serde(default)]
    group: Option<String>,
    source: String,
    dims: Vec<(u32, u64)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSpec {
    label: String,
    degree: usize,
    min_poly: Vec<i64>,
    integral_basis: Vec<Vec<String>>,
    disc: i64,
    fundamental_units: Vec<Vec<String>>,
    class_number: u64,
    narrow_class_number: u64,
    #[serde(default)]
    zeta_minus1: Option<String>,
    #[serde(default)]
    zeta2: Option<(String, String)>,
    #[serde(default)]
    regulator: Option<(String, String)>,
    #[serde(default)]
    genus_reps: Vec<IdealSpec>,
    #[serde(default)]
    class_reps: Vec<IdealSpec>,
    #[serde(default)]
    narrow_class_reps: Vec<IdealSpec>,
    #[serde(default)]
    dim_tables: Vec<DimSpec>,
}

/// Parse `"p/q"`, an integer, or a finite decimal such as `"-1.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || FieldError::Schema(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
}

fn ideal_rows(list: Vec<IdealSpec>, d: usize) -> Result<Vec<(String, Vec<Vec<BigInt>>, BigInt)>> {
    list.into_iter()
        .map(|i| {
            if i.basis.len() != d || i.basis.iter().any(|r| r.len() != d) || i.denom <= 0 {
                return Err(FieldError::Schema(format!("ideal {} must have a {d}x{d} basis and positive denom", i.label)));
            }
            let rows = i.basis.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect();
            Ok((i.label, rows, BigInt::from(i.denom)))
        })
        .collect()
}

fn interval(p: Option<(String, String)>, what: &str) -> Result<Option<(Rat, Rat)>> {
    match p {
        None => Ok(None),
        Some((a, b)) => {
            let (lo, hi) = (parse_rational(&a)?, parse_rational(&b)?);
            if lo > hi {
                return Err(FieldError::Schema(format!("{what} interval is reversed")));
            }
            Ok(Some((lo, hi)))
        }
    }
}

/// Parse and validate a field-spec document.
pub fn parse_field_spec(text: &str) -> Result<NumberField> {
    let spec: FieldSpec = toml::from_str(text).map_err(|e| FieldError::Schema(e.message().to_string()))?;
    let d = spec.degree;
    let parse_rows = |rows: &[Vec<String>]| -> Result<Vec<Vec<Rat>>> {
        rows.iter().map(|r| r.iter().map(|s| parse_rational(s)).collect()).collect()
    };
    let data = FieldData {
        label: spec.label,
        degree: d,
        min_poly: spec.min_poly.iter().map(|c| BigInt::from(*c)).collect(),
        integral_basis: parse_rows(&spec.integral_basis)?,
        disc: BigInt::from(spec.disc),
        fundamental_units: parse_rows(&spec.fundamental_units)?,
        class_number: spec.class_number,
        narrow_class_number: spec.narrow_class_number,
        genus_reps: ideal_rows(spec.genus_reps, d)?,
        class_reps: ideal_rows(spec.class_reps, d)?,
        narrow_class_reps: ideal_rows(spec.narrow_class_reps, d)?,
        zeta_minus1: spec.zeta_minus1.as_deref().map(parse_rational).transpose()?,
        zeta2: interval(spec.zeta2, "zeta2")?,
        regulator: interval(spec.regulator, "regulator")?,
        dim_tables: spec
            .dim_tables
            .into_iter()
            .map(|t| DimTable { level: t.level, genus: t.genus, group: t.group, source: t.source, dims: t.dims })
            .collect(),
    };
    if data.class_number.is_zero() || data.narrow_class_number < data.class_number {
        return Err(FieldError::Schema("class numbers must satisfy 1 <= h <= h+".into()));
    }
    NumberField::new(data)
}

/// Read and parse a field-spec file.
pub fn load_field_spec(path: impl AsRef<Path>) -> Result<NumberField> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| FieldError::Schema(format!("{}: {e}", path.display())))?;
    parse_field_spec(&text)
}
