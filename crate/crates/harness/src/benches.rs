//! The seven benchmark drivers.
//!
//! Each driver runs `spec.runs` independent runs (fresh lock state per
//! run, same seeds — so fixed-iteration runs are exactly repeatable) and
//! reports per-run totals plus the median throughput. Worker delay loops
//! are PRNG advances, so "do k steps of work" is deterministic and cannot
//! be optimized away.

use crate::cache::{RandomCache, DEFAULT_CAPACITY};
use crate::cell::SyncCell;
use crate::prng::Mt19937;
use crate::runner::{drive, RunTotals};
use crate::spec::{BenchKind, BenchSpec, LockKind, Mode};
use locks::{
    CacheSector, IdentityArray, McsLock, TasLock, ThreeStageLock, TicketLock, TktDualLock,
    TwaIdLock, TwaLock, WaitingArray,
};
use std::hint::black_box;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Barrier};
use std::time::Instant;

/// Keys per thread the cache benchmark cycles through.
pub const KEYSET: usize = 10;
/// Cache benchmark key universe: keys are drawn from `[0, KEY_SPACE)`.
pub const KEY_SPACE: u32 = 50_000;

/// Aggregated outcome of one benchmark configuration.
#[derive(Clone, Debug)]
pub struct BenchResult {
    pub spec: BenchSpec,
    /// Lock column for output rows; differs from `spec.lock` for the
    /// benchmarks that pin their subject (`twa-shared`, `twa-private`)
    /// or use no lock at all (`none`).
    pub label: String,
    pub runs: Vec<RunTotals>,
    pub median_ops_per_sec: f64,
}

impl BenchResult {
    fn assemble(spec: BenchSpec, label: &str, runs: Vec<RunTotals>) -> Self {
        let rates: Vec<f64> = runs.iter().map(RunTotals::ops_per_sec).collect();
        let median_ops_per_sec = aggregate_median(&rates);
        BenchResult {
            spec,
            label: label.to_string(),
            runs,
            median_ops_per_sec,
        }
    }
}

/// Exact median of per-run throughputs; run counts are validated odd so
/// the median is an element of the input.
pub fn aggregate_median(rates: &[f64]) -> f64 {
    assert!(
        rates.len() % 2 == 1,
        "median needs an odd number of runs, got {}",
        rates.len()
    );
    let mut sorted = rates.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("throughputs are finite"));
    sorted[sorted.len() / 2]
}

/// What a benchmark hands back to the CLI layer.
pub enum BenchOutput {
    Single(BenchResult),
    /// Interference: same workload against a pool sharing one waiting
    /// array and against per-lock private arrays, plus the shared/private
    /// median-throughput ratio.
    Pair {
        shared: BenchResult,
        private: BenchResult,
        ratio: f64,
    },
    /// Ideal scalability: throughput at `spec.threads` plus the fraction
    /// `rate(T) / (T × rate(1))`.
    Normalized {
        result: BenchResult,
        fraction: f64,
    },
}

pub fn run_bench(spec: &BenchSpec) -> BenchOutput {
    match spec.bench {
        BenchKind::Mutex => BenchOutput::Single(run_mutexbench(spec)),
        BenchKind::Interference => {
            let (shared, private, ratio) = run_interference(spec);
            BenchOutput::Pair {
                shared,
                private,
                ratio,
            }
        }
        BenchKind::Invalidation => BenchOutput::Single(run_invalidation_diameter(spec)),
        BenchKind::Cache => BenchOutput::Single(run_cache_bench(spec)),
        BenchKind::Latency => BenchOutput::Single(run_stress_latency(spec)),
        BenchKind::Torture => BenchOutput::Single(run_torture(spec)),
        BenchKind::Ideal => {
            let (result, fraction) = run_ideal_scalability(spec);
            BenchOutput::Normalized { result, fraction }
        }
    }
}

/// Builds the lock `spec` names in its own 128-byte sector and hands a
/// reference to the body. The waiting-array locks get a fresh private
/// array of `spec.array_len` slots — within a single-lock benchmark the
/// only array traffic is this lock's own, so shared vs. private is
/// indistinguishable, and a private array keeps runs self-contained.
macro_rules! with_spec_lock {
    ($spec:expr, |$lock:ident| $body:expr) => {{
        let spec: &BenchSpec = $spec;
        match spec.lock {
            LockKind::Ticket => {
                let sector = CacheSector::new(TicketLock::new());
                let $lock = &*sector;
                $body
            }
            LockKind::Twa => {
                let sector = CacheSector::new(TwaLock::with_array(
                    Arc::new(WaitingArray::new(spec.array_len)),
                    spec.threshold,
                ));
                let $lock = &*sector;
                $body
            }
            LockKind::Mcs => {
                let sector = CacheSector::new(McsLock::new());
                let $lock = &*sector;
                $body
            }
            LockKind::TktDual => {
                let sector = CacheSector::new(TktDualLock::with_threshold(spec.threshold));
                let $lock = &*sector;
                $body
            }
            LockKind::TwaId => {
                let sector = CacheSector::new(TwaIdLock::with_array(
                    Arc::new(IdentityArray::new(spec.array_len)),
                    spec.threshold,
                ));
                let $lock = &*sector;
                $body
            }
            LockKind::ThreeStage => {
                let sector = CacheSector::new(ThreeStageLock::new());
                let $lock = &*sector;
                $body
            }
            LockKind::Tas => {
                let sector = CacheSector::new(TasLock::new());
                let $lock = &*sector;
                $body
            }
        }
    }};
}

/// Central-lock throughput: each operation is {acquire; `cs_steps` PRNG
/// steps; release; draw d uniform in [0, `ncs_max`); d steps}. An
/// `ncs_max` of 0 disables the non-critical delay (and its draw).
pub fn run_mutexbench(spec: &BenchSpec) -> BenchResult {
    let runs = (0..spec.runs)
        .map(|_| {
            with_spec_lock!(spec, |lock| {
                drive(spec.threads, spec.mode, spec.seed, |_, _| {
                    let cs = spec.cs_steps as u64;
                    let ncs = spec.ncs_max;
                    move |rng: &mut Mt19937| {
                        lock.acquire();
                        rng.advance(cs);
                        lock.release();
                        if ncs > 0 {
                            let d = rng.next_below(ncs);
                            rng.advance(d as u64);
                        }
                    }
                })
            })
        })
        .collect();
    BenchResult::assemble(spec.clone(), spec.lock.name(), runs)
}

fn interference_config(spec: &BenchSpec, share_array: bool) -> BenchResult {
    let label = if share_array {
        "twa-shared"
    } else {
        "twa-private"
    };
    let runs = (0..spec.runs)
        .map(|_| {
            let shared_array = Arc::new(WaitingArray::new(spec.array_len));
            let pool: Vec<CacheSector<TwaLock>> = (0..spec.pool_size)
                .map(|_| {
                    let array = if share_array {
                        shared_array.clone()
                    } else {
                        Arc::new(WaitingArray::new(spec.array_len))
                    };
                    CacheSector::new(TwaLock::with_array(array, spec.threshold))
                })
                .collect();
            drive(spec.threads, spec.mode, spec.seed, |_, _| {
                let pool = &pool;
                let cs = spec.cs_steps as u64;
                let ncs = spec.ncs_max as u64;
                move |rng: &mut Mt19937| {
                    let lock = &*pool[rng.next_below(pool.len() as u32) as usize];
                    lock.acquire();
                    rng.advance(cs);
                    lock.release();
                    rng.advance(ncs);
                }
            })
        })
        .collect();
    BenchResult::assemble(spec.clone(), label, runs)
}

/// Inter-lock interference: every operation picks a uniformly random lock
/// from a pool of `pool_size` waiting-array locks, holds it for
/// `cs_steps` PRNG steps, then runs exactly `ncs_max` steps unlocked.
/// Measured twice — all pool locks hashing into one waiting array, then
/// each lock with a private array — and reported with the shared/private
/// throughput ratio (1.0 = no interference penalty). The lock kind is
/// pinned to the waiting-array lock; `spec.lock` is ignored.
pub fn run_interference(spec: &BenchSpec) -> (BenchResult, BenchResult, f64) {
    let shared = interference_config(spec, true);
    let private = interference_config(spec, false);
    let ratio = shared.median_ops_per_sec / private.median_ops_per_sec;
    (shared, private, ratio)
}

// The write target must be the sole occupant of its cache sector, so
// that the benchmark measures invalidation of exactly one line.
const _: () = assert!(core::mem::size_of::<CacheSector<AtomicU64>>() == 128);
const _: () = assert!(core::mem::align_of::<CacheSector<AtomicU64>>() == 128);

fn invalidation_run(spec: &BenchSpec) -> RunTotals {
    let readers = spec.threads as usize - 1;
    let target = CacheSector::new(AtomicU64::new(0));
    let stop = AtomicBool::new(false);
    let barrier = Barrier::new(spec.threads as usize + 1);

    std::thread::scope(|s| {
        for _ in 0..readers {
            s.spawn(|| {
                barrier.wait();
                while !stop.load(Ordering::Relaxed) {
                    black_box(target.load(Ordering::Relaxed));
                }
            });
        }
        // The writer times its own loop: the coordinator's clock would
        // undercount on a single CPU, where a short fixed loop can finish
        // before the coordinator is rescheduled after the barrier.
        let writer = s.spawn(|| {
            barrier.wait();
            let started = Instant::now();
            let mut ops = 0u64;
            match spec.mode {
                Mode::Timed(_) => {
                    while !stop.load(Ordering::Relaxed) {
                        target.fetch_add(1, Ordering::Relaxed);
                        ops += 1;
                    }
                }
                Mode::FixedPerThread(n) => {
                    for _ in 0..n {
                        target.fetch_add(1, Ordering::Relaxed);
                    }
                    ops = n;
                    stop.store(true, Ordering::Relaxed);
                }
            }
            (ops, started.elapsed())
        });

        barrier.wait();
        if let Mode::Timed(d) = spec.mode {
            std::thread::sleep(d);
            stop.store(true, Ordering::Relaxed);
        }
        let (ops, elapsed) = writer.join().unwrap();

        let mut per_thread = vec![0u64; spec.threads as usize];
        per_thread[0] = ops;
        RunTotals {
            total: ops,
            per_thread,
            elapsed,
            // No PRNG in this benchmark.
            digests: Vec::new(),
        }
    })
}

/// Invalidation diameter: one writer fetch-and-adds a counter that owns
/// its whole 128-byte sector while `threads − 1` readers spin loading it;
/// reported throughput is the writer's. `threads == 1` is the zero-reader
/// baseline. Readers contribute rows of 0 ops, so conservation holds.
/// No lock is involved; `spec.lock` is ignored.
pub fn run_invalidation_diameter(spec: &BenchSpec) -> BenchResult {
    let runs = (0..spec.runs).map(|_| invalidation_run(spec)).collect();
    BenchResult::assemble(spec.clone(), "none", runs)
}

/// Random-replacement cache behind a central lock. Each thread keeps a
/// working set of [`KEYSET`] keys (pre-populated with replacement from
/// `[0, KEY_SPACE)`): with probability 0.9 it reuses a random working-set
/// key, otherwise it draws a fresh key and installs it in a random
/// working-set slot. The cache access itself — including the eviction
/// draw from the accessing thread's generator — happens under the lock;
/// the inter-access delay is a uniform draw from `[0, ncs_max)` steps.
pub fn run_cache_bench(spec: &BenchSpec) -> BenchResult {
    let runs = (0..spec.runs)
        .map(|_| {
            with_spec_lock!(spec, |lock| {
                let cache = SyncCell::new(RandomCache::new(DEFAULT_CAPACITY));
                let cache = &cache;
                drive(spec.threads, spec.mode, spec.seed, |_, rng| {
                    let mut keyset: [u32; KEYSET] =
                        std::array::from_fn(|_| rng.next_below(KEY_SPACE));
                    let ncs = spec.ncs_max;
                    move |rng: &mut Mt19937| {
                        let key = if rng.next_below(10) < 9 {
                            keyset[rng.next_below(KEYSET as u32) as usize]
                        } else {
                            let fresh = rng.next_below(KEY_SPACE);
                            keyset[rng.next_below(KEYSET as u32) as usize] = fresh;
                            fresh
                        };
                        lock.acquire();
                        // Safety: mutated only while holding `lock`.
                        let hit = unsafe { cache.get_mut() }.access(key, rng);
                        lock.release();
                        black_box(hit);
                        if ncs > 0 {
                            let d = rng.next_below(ncs);
                            rng.advance(d as u64);
                        }
                    }
                })
            })
        })
        .collect();
    BenchResult::assemble(spec.clone(), spec.lock.name(), runs)
}

/// Handover latency under saturation: every operation holds the lock for
/// a fixed `cs_steps` delay (default 200) and then runs a fixed `ncs_max`
/// delay (default 5000) unlocked — both exact step counts, no draws.
pub fn run_stress_latency(spec: &BenchSpec) -> BenchResult {
    let runs = (0..spec.runs)
        .map(|_| {
            with_spec_lock!(spec, |lock| {
                drive(spec.threads, spec.mode, spec.seed, |_, _| {
                    let cs = spec.cs_steps as u64;
                    let ncs = spec.ncs_max as u64;
                    move |rng: &mut Mt19937| {
                        lock.acquire();
                        rng.advance(cs);
                        lock.release();
                        rng.advance(ncs);
                    }
                })
            })
        })
        .collect();
    BenchResult::assemble(spec.clone(), spec.lock.name(), runs)
}

/// Contention torture: short fixed critical section (`cs_steps`, default
/// 20) and a non-critical delay drawn uniformly from the *inclusive*
/// range [0, `ncs_max`] — so `--ncs-max 0` degenerates to back-to-back
/// handovers, the worst case.
pub fn run_torture(spec: &BenchSpec) -> BenchResult {
    let runs = (0..spec.runs)
        .map(|_| {
            with_spec_lock!(spec, |lock| {
                drive(spec.threads, spec.mode, spec.seed, |_, _| {
                    let cs = spec.cs_steps as u64;
                    let bound = spec.ncs_max.saturating_add(1);
                    move |rng: &mut Mt19937| {
                        lock.acquire();
                        rng.advance(cs);
                        lock.release();
                        let d = rng.next_below(bound);
                        rng.advance(d as u64);
                    }
                })
            })
        })
        .collect();
    BenchResult::assemble(spec.clone(), spec.lock.name(), runs)
}

fn ideal_config(spec: &BenchSpec, threads: u32) -> BenchResult {
    let mut echoed = spec.clone();
    echoed.threads = threads;
    let runs = (0..spec.runs)
        .map(|_| {
            drive(threads, spec.mode, spec.seed, |_, _| {
                let cs = spec.cs_steps.max(1) as u64;
                move |rng: &mut Mt19937| {
                    black_box(rng.advance(cs));
                }
            })
        })
        .collect();
    BenchResult::assemble(echoed, "none", runs)
}

/// Upper bound on scalability with zero sharing: each thread advances a
/// private generator, nothing else. Returns the result at `spec.threads`
/// and the interference fraction `rate(T) / (T × rate(1))`; a fraction of
/// 1.0 means T threads do T times the single-thread work. T = 1 is 1.0 by
/// definition and skips the redundant baseline measurement. No lock is
/// involved; `spec.lock` is ignored.
pub fn run_ideal_scalability(spec: &BenchSpec) -> (BenchResult, f64) {
    let result = ideal_config(spec, spec.threads);
    if spec.threads == 1 {
        return (result, 1.0);
    }
    let baseline = ideal_config(spec, 1);
    let fraction = result.median_ops_per_sec / (spec.threads as f64 * baseline.median_ops_per_sec);
    (result, fraction)
}
