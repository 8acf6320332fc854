//! Command-line front end for `cyclic-slope-core`: JSON model and germ
//! files, report tables and the verification ledger.

pub mod commands;
pub mod error;
pub mod io;
pub mod suite;
pub mod table;

pub use error::CliError;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CYCLIC_SLOPE_THREADS";

/// Run `f` on a thread pool sized by `CYCLIC_SLOPE_THREADS` when set.
pub fn with_thread_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&t| t > 0);
    match threads.map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build()) {
        Some(Ok(pool)) => pool.install(f),
        _ => f(),
    }
}
