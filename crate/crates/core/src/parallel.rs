//! Worker pool and per-task random streams.
//!
//! Every independent work item (a channel trial, a Monte Carlo instance)
//! gets its own ChaCha stream derived from `(seed, task)`, so results do not
//! depend on how rayon schedules the items.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable bounding the number of worker threads.
pub const THREADS_ENV: &str = "STBC_FSD_THREADS";

/// Shared pool sized from [`THREADS_ENV`] (rayon's default when unset).
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
    })
}

/// RNG for work item `task` under `seed`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}
