use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cusp_field::{load_field_spec, NumberField};

/// `CUSP_TOOLKIT_FIXTURES`, or the `fixtures/` directory of the source tree.
pub fn fixtures_dir() -> PathBuf {
    match std::env::var_os("CUSP_TOOLKIT_FIXTURES") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

/// Accepts a path to a spec file or a short name such as `disc-473`, `473`,
/// `sqrt14` or `√14`.
pub fn resolve_field(arg: &str, dir: &Path) -> Result<PathBuf> {
    let p = Path::new(arg);
    if p.is_file() {
        return Ok(p.to_path_buf());
    }
    let s = arg.trim();
    let name = if let Some(r) = s.strip_prefix('√') {
        format!("sqrt{r}")
    } else if s.chars().all(|c| c.is_ascii_digit()) {
        format!("disc{s}")
    } else {
        s.replace('-', "")
    };
    let f = dir.join("fields").join(format!("{name}.toml"));
    if !f.is_file() {
        bail!("no field spec at {arg:?} and no fixture {}", f.display());
    }
    Ok(f)
}

pub fn load_field(arg: &str, dir: &Path) -> Result<NumberField> {
    let path = resolve_field(arg, dir)?;
    load_field_spec(&path).with_context(|| format!("loading {}", path.display()))
}
