//! Multi-threaded drivers. Work is cut into fixed chunks independent of the
//! thread count and results are combined exactly, so outputs do not depend
//! on `threads`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use homperc_core::homology::summarize_trials;
use homperc_core::sweep::{accumulate, Accumulator};
use homperc_core::{CanonicalSeries, CoveringReport, CoveringSearch, DualPair};

/// Sweeps per work unit.
pub const SWEEP_CHUNK: u64 = 256;

/// Worker count from `HOMPERC_THREADS` or the available parallelism.
pub fn default_threads() -> usize {
    std::env::var("HOMPERC_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `count` jobs on up to `threads` workers and returns results in job
/// order.
pub fn run_jobs<T: Send>(count: usize, threads: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = threads.clamp(1, count.max(1));
    if threads == 1 {
        return (0..count).map(&job).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = job(i);
                results.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("job ran"))
        .collect()
}

/// `sweeps` sweeps of `pair`; identical to the single-threaded aggregate.
pub fn aggregate(
    pair: &DualPair,
    k: usize,
    sweeps: u64,
    seed: u64,
    threads: usize,
) -> CanonicalSeries {
    let chunks = sweeps.div_ceil(SWEEP_CHUNK) as usize;
    let parts = run_jobs(chunks, threads, |c| {
        let start = c as u64 * SWEEP_CHUNK;
        accumulate(pair, k, start..(start + SWEEP_CHUNK).min(sweeps), seed)
    });
    let mut total = Accumulator::new(pair.primal().num_edges(), k);
    for part in &parts {
        total.merge(part);
    }
    total.finish(pair.primal().num_vertices())
}

/// Covering-set search over `trials` trials split across workers.
pub fn covering(
    search: &CoveringSearch,
    trials: usize,
    seed: u64,
    threads: usize,
) -> CoveringReport {
    const CHUNK: u64 = 8;
    let trials = trials as u64;
    let chunks = trials.div_ceil(CHUNK) as usize;
    let parts = run_jobs(chunks, threads, |c| {
        let start = c as u64 * CHUNK;
        search.run(start..(start + CHUNK).min(trials), seed)
    });
    summarize_trials(&parts.concat())
}
