//! Deterministic lock microbenchmark harness.
//!
//! Seven workloads measure the locks in the `locks` crate from different
//! angles: central-lock throughput, inter-lock waiting-array
//! interference, store invalidation cost across reader counts, a locked
//! random-replacement cache, handover latency under saturation, tunable
//! contention torture, and an upper-bound run with no sharing at all.
//!
//! Determinism is the organizing principle: all workload randomness comes
//! from per-thread Mersenne Twister generators seeded `seed + thread
//! index`, delay loops are generator advances, and fixed-iteration mode
//! makes entire runs exactly repeatable. Wall-clock throughput is the
//! only nondeterministic output.

pub mod benches;
pub mod cache;
pub mod cell;
pub mod prng;
pub mod runner;
pub mod spec;

pub use benches::{
    aggregate_median, run_bench, run_cache_bench, run_ideal_scalability, run_interference,
    run_invalidation_diameter, run_mutexbench, run_stress_latency, run_torture, BenchOutput,
    BenchResult,
};
pub use cache::{mix32, RandomCache};
pub use cell::SyncCell;
pub use prng::Mt19937;
pub use runner::{drive, RunTotals};
pub use spec::{BenchKind, BenchSpec, LockKind, Mode, SpecError};
