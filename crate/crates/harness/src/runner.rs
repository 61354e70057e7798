//! Generic measurement loop: spawn workers, synchronize a start, count
//! operations until the mode says stop, join, and aggregate.

use crate::prng::Mt19937;
use crate::spec::Mode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Barrier;
use std::time::{Duration, Instant};

/// What one run produced. `total` is always the sum of `per_thread`;
/// callers re-verify this (conservation) rather than trusting it.
#[derive(Clone, Debug)]
pub struct RunTotals {
    pub per_thread: Vec<u64>,
    pub total: u64,
    pub elapsed: Duration,
    /// Per-thread PRNG end-state digests, for determinism checks.
    pub digests: Vec<u64>,
}

impl RunTotals {
    pub fn ops_per_sec(&self) -> f64 {
        self.total as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }

    pub fn conserved(&self) -> bool {
        self.total == self.per_thread.iter().sum::<u64>()
    }
}

/// Runs one measurement: `threads` workers, each with a private PRNG
/// seeded `seed + index`, repeatedly invoking the operation closure that
/// `make(index, &mut rng)` built on that worker's own thread (so setup
/// draws come from the worker's generator, outside the timed window).
///
/// Workers start together behind a barrier and each timestamps its own
/// loop; the measured window spans the earliest worker start to the
/// latest worker finish. (Timing from the coordinating thread instead
/// would undercount grossly on a single CPU, where short fixed loops can
/// finish before the coordinator is rescheduled after the barrier.) In
/// timed mode the coordinator sleeps and then raises a stop flag, so
/// each worker overshoots by at most one operation; in fixed mode every
/// worker performs exactly `n` operations. Threads are left unbound:
/// placement belongs to the scheduler.
pub fn drive<W, F>(threads: u32, mode: Mode, seed: u32, make: F) -> RunTotals
where
    F: Fn(usize, &mut Mt19937) -> W + Sync,
    W: FnMut(&mut Mt19937),
{
    assert!(threads >= 1);
    let stop = AtomicBool::new(false);
    let barrier = Barrier::new(threads as usize + 1);

    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let stop = &stop;
                let barrier = &barrier;
                let make = &make;
                s.spawn(move || {
                    let mut rng = Mt19937::new(seed.wrapping_add(i));
                    let mut op = make(i as usize, &mut rng);
                    let mut ops = 0u64;
                    barrier.wait();
                    let started = Instant::now();
                    match mode {
                        Mode::Timed(_) => {
                            while !stop.load(Ordering::Relaxed) {
                                op(&mut rng);
                                ops += 1;
                            }
                        }
                        Mode::FixedPerThread(n) => {
                            for _ in 0..n {
                                op(&mut rng);
                                ops += 1;
                            }
                        }
                    }
                    (ops, rng.state_digest(), started, Instant::now())
                })
            })
            .collect();

        barrier.wait();
        if let Mode::Timed(d) = mode {
            std::thread::sleep(d);
            stop.store(true, Ordering::Relaxed);
        }
        let outcomes: Vec<(u64, u64, Instant, Instant)> =
            handles.into_iter().map(|h| h.join().unwrap()).collect();
        outcomes
    });

    let first_start = outcomes.iter().map(|o| o.2).min().expect("threads >= 1");
    let last_finish = outcomes.iter().map(|o| o.3).max().expect("threads >= 1");
    let per_thread: Vec<u64> = outcomes.iter().map(|o| o.0).collect();
    let digests: Vec<u64> = outcomes.iter().map(|o| o.1).collect();
    RunTotals {
        total: per_thread.iter().sum(),
        per_thread,
        elapsed: last_finish.duration_since(first_start),
        digests,
    }
}
