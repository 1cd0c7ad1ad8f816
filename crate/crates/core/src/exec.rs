//! Fork-join execution over a fixed number of workers.
//!
//! With the `parallel` feature each call runs its workers on a rayon pool
//! holding exactly that many threads. Without it the workers run one after
//! another on the calling thread. Results always come back in worker order,
//! so callers see the same output either way.

use std::cmp::Ordering;
use std::ops::Range;

/// Splits `0..len` into `parts` contiguous blocks; sizes differ by at most one.
pub fn even_blocks(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1);
    (0..parts)
        .map(|p| block_start(len, parts, p)..block_start(len, parts, p + 1))
        .collect()
}

#[inline]
fn block_start(len: usize, parts: usize, p: usize) -> usize {
    ((len as u128 * p as u128) / parts as u128) as usize
}

/// Runs `job(w)` for every worker `w` in `0..workers` and returns the results
/// in worker order.
pub fn run_workers<T, F>(workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1);
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            use rayon::prelude::*;
            return pool::get(workers).install(|| (0..workers).into_par_iter().map(&job).collect());
        }
    }
    (0..workers).map(job).collect()
}

/// Sorts `items` by `cmp`, using `workers` threads when parallelism is enabled.
/// `cmp` must be a total order so the result does not depend on `workers`.
pub fn sort_by<T, F>(items: &mut [T], workers: usize, cmp: F)
where
    T: Send,
    F: Fn(&T, &T) -> Ordering + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            use rayon::prelude::*;
            pool::get(workers).install(|| items.par_sort_unstable_by(&cmp));
            return;
        }
    }
    let _ = workers;
    items.sort_unstable_by(cmp);
}

/// Whether this build can actually run workers concurrently.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
mod pool {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    use rayon::{ThreadPool, ThreadPoolBuilder};

    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();

    /// Returns the shared pool with exactly `threads` threads.
    pub(super) fn get(threads: usize) -> Arc<ThreadPool> {
        let mut pools = POOLS
            .get_or_init(Default::default)
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        pools
            .entry(threads)
            .or_insert_with(|| {
                Arc::new(
                    ThreadPoolBuilder::new()
                        .num_threads(threads)
                        .thread_name(move |i| format!("ddm-{threads}-{i}"))
                        .build()
                        .expect("failed to build worker pool"),
                )
            })
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_and_balance() {
        for len in [0usize, 1, 7, 10, 100, 1001] {
            for parts in 1..=17 {
                let b = even_blocks(len, parts);
                assert_eq!(b.len(), parts);
                assert_eq!(b[0].start, 0);
                assert_eq!(b.last().unwrap().end, len);
                for w in b.windows(2) {
                    assert_eq!(w[0].end, w[1].start);
                }
                let sizes: Vec<_> = b.iter().map(|r| r.len()).collect();
                let (mn, mx) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
                assert!(mx - mn <= 1, "len={len} parts={parts} sizes={sizes:?}");
            }
        }
    }

    #[test]
    fn workers_return_in_order() {
        for w in [1, 2, 4, 9] {
            assert_eq!(run_workers(w, |i| i * 10), (0..w).map(|i| i * 10).collect::<Vec<_>>());
        }
    }

    #[test]
    fn sort_is_worker_independent() {
        let base: Vec<u64> = (0..5000u64).map(|i| i.wrapping_mul(2654435761) % 977).collect();
        let mut a = base.clone();
        sort_by(&mut a, 1, |x, y| x.cmp(y));
        let mut b = base;
        sort_by(&mut b, 4, |x, y| x.cmp(y));
        assert_eq!(a, b);
    }
}
