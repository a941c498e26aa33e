//! Execution-mode plumbing. Parallel maps collect per-item results in index
//! order and reduce with a fixed-shape pairwise tree, so sums are bit-identical
//! across modes and worker counts.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

impl ExecMode {
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            Some(1) => ExecMode::Sequential,
            _ => ExecMode::Parallel,
        }
    }
}

/// Installs a bounded rayon pool when `workers` is Some(n), n >= 2.
/// Returns false when the global pool was already configured elsewhere.
#[cfg(feature = "parallel")]
pub fn configure_workers(workers: Option<usize>) -> bool {
    match workers {
        Some(n) if n >= 2 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_ok(),
        _ => true,
    }
}

#[cfg(not(feature = "parallel"))]
pub fn configure_workers(_workers: Option<usize>) -> bool {
    true
}

/// Maps `f` over `0..n`, returning results in index order.
pub fn map_indexed<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => map_parallel(n, f),
    }
}

#[cfg(feature = "parallel")]
fn map_parallel<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_parallel<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Pairwise tree sum with a shape determined only by `xs.len()`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Sum of `f(i)` for `i in 0..n`, identical bits under either mode.
pub fn sum_indexed<F>(mode: ExecMode, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let terms = map_indexed(mode, n, f);
    pairwise_sum(&terms)
}
