//! Experiment harness for `tridiag-hira`.

pub mod experiments;
pub mod output;
pub mod stats;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "TRIDIAG_HIRA_THREADS";

/// Sizes the global rayon pool from [`THREADS_VAR`], if set. Safe to call
/// more than once; only the first call takes effect.
pub fn init_thread_pool() -> anyhow::Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    anyhow::ensure!(n > 0, "{THREADS_VAR} must be a positive integer, got {v:?}");
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}
