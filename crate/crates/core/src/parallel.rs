//! Worker pool for grid evaluation.
//!
//! `FUETERLAB_THREADS` caps the number of workers; unset or invalid values
//! fall back to rayon's default.

use once_cell::sync::Lazy;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

pub const THREADS_ENV: &str = "FUETERLAB_THREADS";

static POOL: Lazy<ThreadPool> = Lazy::new(|| {
    let mut builder = ThreadPoolBuilder::new().thread_name(|i| format!("fueterlab-{i}"));
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    builder.build().expect("failed to build worker pool")
});

pub fn pool() -> &'static ThreadPool {
    &POOL
}

/// Ordered parallel map; output order matches input order, so reductions
/// over the result are deterministic.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    pool().install(|| items.par_iter().map(&f).collect())
}
