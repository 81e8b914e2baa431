//! Pluggable execution of independent work items.
//!
//! Numerical kernels express their parallel loops through [`Executor`] so the
//! core stays `no_std`; a threaded implementation lives in the companion
//! crate. Every item is computed by the same code regardless of the executor
//! and results are returned in index order, so output is bit-identical for any
//! worker count.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Evaluate `f(0), f(1), …, f(n − 1)` and return them in order.
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every item on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
