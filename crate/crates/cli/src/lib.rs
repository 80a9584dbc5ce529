//! Configuration files, checkpoints and experiment commands for `vvlab`.

pub mod checkpoint;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::{CliError, Result};

/// Runs `f` on a dedicated pool of `threads` workers (all cores if `None`).
/// The thread count changes speed only; every reduction has a fixed order.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?.install(f))
}
