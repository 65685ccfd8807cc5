//! Trial fan-out. With the `parallel` feature trials run on a rayon pool;
//! without it, or with one thread, they run in order on the calling thread.
//! Results always come back in job order.

use crate::Result;

/// Maps `job` over `items` sequentially.
pub fn map_sequential<I, T, F>(items: &[I], job: F) -> Result<Vec<T>>
where
    F: Fn(&I) -> Result<T>,
{
    items.iter().map(job).collect()
}

/// Maps `job` over `items` on a rayon pool of `threads` workers
/// (rayon's default when `None`).
#[cfg(feature = "parallel")]
pub fn map_parallel<I, T, F>(items: &[I], threads: Option<usize>, job: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| crate::Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(&job).collect())
}

/// Picks the parallel path when it is compiled in and more than one thread is allowed.
pub fn map_trials<I, T, F>(items: &[I], threads: Option<usize>, job: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    if threads == Some(0) {
        return Err(crate::Error::Config(
            "thread count must be at least 1".into(),
        ));
    }
    #[cfg(feature = "parallel")]
    if threads != Some(1) {
        return map_parallel(items, threads, job);
    }
    map_sequential(items, job)
}
