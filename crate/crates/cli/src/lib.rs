//! Library side of the `cusp-toolkit` command: report building, level
//! notation and table reproduction.

pub mod fixtures;
pub mod level;
pub mod report;
pub mod tables;

use anyhow::{bail, Context, Result};

pub const THREADS_ENV: &str = "CUSP_TOOLKIT_THREADS";

/// Worker count from `--threads`, else `CUSP_TOOLKIT_THREADS`, else rayon's default.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        if n == 0 {
            bail!("--threads must be positive");
        }
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?} is not a positive integer"))?;
            if n == 0 {
                bail!("{THREADS_ENV} must be positive");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

pub fn init_threads(flag: Option<usize>) -> Result<()> {
    if let Some(n) = thread_count(flag)? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}
