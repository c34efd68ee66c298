//! Command-line front end for the certification game: scenario files,
//! sweeps, certification of observed data and verification suites.

pub mod commands;
pub mod distribution;
pub mod error;
pub mod scenario_file;
pub mod state_ref;
pub mod suites;
pub mod sweep;

pub use error::{CliError, CliResult};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SDI_CERT_THREADS";

/// Applies [`THREADS_ENV`] to the global thread pool, if set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::parse(THREADS_ENV, format!("{raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::parse(THREADS_ENV, e))
}
