//! Thread-pool executor for the core kernels.

use latscat_core::exec::Executor;
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Work items spread over a dedicated rayon pool. Results come back in index
/// order, so output does not depend on the worker count.
pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// `workers = 0` picks the number of available cores.
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Pool {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
