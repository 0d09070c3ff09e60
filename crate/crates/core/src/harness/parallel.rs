//! Replica fan-out with results reduced in replica order.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Evaluates `f(0..count)` on a pool of `workers` threads.
///
/// The output order and values do not depend on `workers`. The first failing
/// replica (by index) is reported as [`Error::Replica`].
pub fn par_replicas<T, F>(workers: usize, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::invalid("worker count must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let out: Vec<Result<T>> = pool.install(|| (0..count).into_par_iter().map(&f).collect());
    out.into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| match e {
                Error::Replica { .. } => e,
                other => Error::Replica { replica: i as u64, message: other.to_string() },
            })
        })
        .collect()
}
