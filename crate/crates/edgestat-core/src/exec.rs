//! Replica execution. Replica i always uses seed base_seed + i, so results do
//! not depend on how replicas are scheduled.

use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

/// Seed of replica `index`.
pub fn replica_seed(base_seed: u64, index: u64) -> u64 {
    base_seed.wrapping_add(index)
}

pub fn replica_rng(base_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replica_seed(base_seed, index))
}

/// Runs `f(0..replicas)` and returns results in replica order.
pub trait ReplicaExecutor: Sync {
    fn run<T, F>(&self, replicas: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl ReplicaExecutor for Serial {
    fn run<T, F>(&self, replicas: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..replicas).map(f).collect()
    }
}

impl<E: ReplicaExecutor> ReplicaExecutor for &E {
    fn run<T, F>(&self, replicas: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (**self).run(replicas, f)
    }
}
