//! Configuration-driven front end for the zygops toolkit.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use commands::{run, Command, Outcome};
pub use config::RunConfig;
pub use error::{CliError, CliResult};

/// Environment variable capping the worker threads (0 or unset = automatic).
pub const THREADS_ENV: &str = "ZYGOPS_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`].
pub fn init_threads() -> CliResult<()> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::config(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    // A pool that is already built (tests calling this twice) is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
