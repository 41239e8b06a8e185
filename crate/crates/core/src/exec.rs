//! Data-parallel helpers with a sequential fallback.
//!
//! Every search in the crate runs over a contiguous `u64` index range (an
//! allocation number, a trial number, a kernel assignment). These helpers hide
//! whether the range is scanned with rayon or with a plain loop. Results never
//! depend on the mode: "first" always means the smallest matching index.

use std::ops::Range;

/// How index-range work is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise identical
    /// to [`Execution::Sequential`].
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Smallest index in `range` satisfying `pred`.
pub fn find_first<F>(mode: Execution, range: Range<u64>, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().find_first(|&idx| pred(idx));
    }
    let _ = mode;
    range.into_iter().find(|&idx| pred(idx))
}

/// Number of indices satisfying `pred`, and the smallest of them.
pub fn count_with_first<F>(mode: Execution, range: Range<u64>, pred: F) -> (u64, Option<u64>)
where
    F: Fn(u64) -> bool + Sync + Send,
{
    fn merge(a: (u64, Option<u64>), b: (u64, Option<u64>)) -> (u64, Option<u64>) {
        let first = match (a.1, b.1) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        (a.0 + b.0, first)
    }

    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .fold(
                || (0u64, None),
                |acc, idx| if pred(idx) { merge(acc, (1, Some(idx))) } else { acc },
            )
            .reduce(|| (0, None), merge);
    }
    let _ = mode;
    range
        .into_iter()
        .filter(|&idx| pred(idx))
        .fold((0, None), |acc, idx| merge(acc, (1, Some(idx))))
}

/// `f` applied to every index, in index order.
pub fn map_collect<T, F>(mode: Execution, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = mode;
    range.map(f).collect()
}

/// Maximum of `f` over the range; `None` on an empty range.
pub fn max_by_key<T, F>(mode: Execution, range: Range<u64>, f: F) -> Option<T>
where
    T: Ord + Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).max();
    }
    let _ = mode;
    range.map(f).max()
}
