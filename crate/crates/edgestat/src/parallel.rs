//! Replica execution on a rayon pool. Results come back in replica order, so
//! output is identical to `Serial` for any thread count.

use edgestat_core::exec::ReplicaExecutor;
use rayon::prelude::*;

pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `threads = 0` uses the available parallelism.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Parallel { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl ReplicaExecutor for Parallel {
    fn run<T, F>(&self, replicas: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..replicas).into_par_iter().map(f).collect())
    }
}
