//! Parallel/sequential bridge for the enumeration loops.
//!
//! Candidate checks in the exponential verifiers are independent, so
//! they parallelize trivially; results are collected in the original
//! index order, making the output identical with or without rayon. The
//! `_seq` variants are always compiled — the bench suite compares the
//! two directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Keeps the items passing `keep`, in input order.
#[cfg(feature = "parallel")]
pub fn filter_vec<T, F>(items: Vec<T>, keep: F) -> Vec<T>
where
    T: Send,
    F: Fn(&T) -> bool + Sync + Send,
{
    items.into_par_iter().filter(|t| keep(t)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_vec<T, F>(items: Vec<T>, keep: F) -> Vec<T>
where
    F: Fn(&T) -> bool,
{
    filter_vec_seq(items, keep)
}

pub fn filter_vec_seq<T, F>(items: Vec<T>, keep: F) -> Vec<T>
where
    F: Fn(&T) -> bool,
{
    items.into_iter().filter(|t| keep(t)).collect()
}

/// Maps `f` over `0..n`, keeping the `Some` results in index order.
#[cfg(feature = "parallel")]
pub fn filter_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    (0..n).into_par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> Option<T>,
{
    filter_map_range_seq(n, f)
}

pub fn filter_map_range_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> Option<T>,
{
    (0..n).filter_map(f).collect()
}
