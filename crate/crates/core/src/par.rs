//! Sequential or data-parallel execution of independent work items.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] runs
//! sequentially. Results are always returned in input order.

use std::ops::Range;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel,
}

impl Execution {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    /// True when this build can actually run work on several threads.
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel => par_map(items, f),
        }
    }

    /// Sum of `f` over a range of integers.
    pub fn sum_range<F>(self, range: Range<u64>, f: F) -> u64
    where
        F: Fn(u64) -> u64 + Sync + Send,
    {
        match self {
            Execution::Sequential => range.map(f).sum(),
            Execution::Parallel => par_sum(range, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_sum<F>(range: Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
fn par_sum<F>(range: Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    range.map(f).sum()
}
