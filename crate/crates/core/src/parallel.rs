//! Worker-pool plumbing. Results never depend on the number of workers.

/// Runs `f` on a dedicated pool of `jobs` threads (at least one).
pub(crate) fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(f),
        // no threads available: fall back to the calling thread
        Err(_) => f(),
    }
}
