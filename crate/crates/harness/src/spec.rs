//! Benchmark run descriptions: which benchmark, which lock, and the knobs
//! every driver shares.

use std::fmt;
use std::time::Duration;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BenchKind {
    /// Central lock, short critical section, random non-critical delay.
    Mutex,
    /// Lock pool with a shared waiting array vs. private arrays.
    Interference,
    /// One atomic writer, a sweep of readers; no lock involved.
    Invalidation,
    /// Bounded random-replacement cache behind a central lock.
    Cache,
    /// Long fixed critical and non-critical delay loops.
    Latency,
    /// Short critical section, tunable contention level.
    Torture,
    /// Fully independent threads; measures the machine, not a lock.
    Ideal,
}

impl BenchKind {
    pub const ALL: [BenchKind; 7] = [
        BenchKind::Mutex,
        BenchKind::Interference,
        BenchKind::Invalidation,
        BenchKind::Cache,
        BenchKind::Latency,
        BenchKind::Torture,
        BenchKind::Ideal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchKind::Mutex => "mutex",
            BenchKind::Interference => "interference",
            BenchKind::Invalidation => "invalidation",
            BenchKind::Cache => "cache",
            BenchKind::Latency => "latency",
            BenchKind::Torture => "torture",
            BenchKind::Ideal => "ideal",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LockKind {
    Ticket,
    Twa,
    Mcs,
    TktDual,
    TwaId,
    ThreeStage,
    Tas,
}

impl LockKind {
    pub const ALL: [LockKind; 7] = [
        LockKind::Ticket,
        LockKind::Twa,
        LockKind::Mcs,
        LockKind::TktDual,
        LockKind::TwaId,
        LockKind::ThreeStage,
        LockKind::Tas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LockKind::Ticket => "ticket",
            LockKind::Twa => "twa",
            LockKind::Mcs => "mcs",
            LockKind::TktDual => "tktdual",
            LockKind::TwaId => "twaid",
            LockKind::ThreeStage => "threestage",
            LockKind::Tas => "tas",
        }
    }
}

/// How long a run lasts: wall-clock (the measurement mode) or a fixed
/// per-thread iteration count (schedule-bounded, for tests and CI).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Timed(Duration),
    FixedPerThread(u64),
}

impl Mode {
    pub fn label(&self) -> String {
        match self {
            Mode::Timed(d) => format!("timed:{}s", d.as_secs_f64()),
            Mode::FixedPerThread(n) => format!("fixed:{n}"),
        }
    }
}

/// A fully-specified benchmark configuration.
///
/// `cs_steps` and `ncs_max` parameterize the critical and non-critical
/// sections; their meaning is per-benchmark (documented on each driver).
/// `array_len`/`threshold` only affect the waiting-array locks, and
/// `pool_size` only the interference benchmark.
#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub bench: BenchKind,
    pub lock: LockKind,
    pub threads: u32,
    pub mode: Mode,
    pub cs_steps: u32,
    pub ncs_max: u32,
    pub pool_size: u32,
    pub array_len: usize,
    pub threshold: u32,
    pub seed: u32,
    pub runs: u32,
}

impl BenchSpec {
    /// A spec with this benchmark's default knobs (the values the source
    /// experiments used, scaled nowhere — only counts/durations are
    /// CLI-adjustable).
    pub fn with_defaults(bench: BenchKind, lock: LockKind) -> Self {
        let (cs_steps, ncs_max, secs, runs) = match bench {
            BenchKind::Mutex => (4, 200, 10, 5),
            BenchKind::Interference => (50, 100, 10, 7),
            BenchKind::Invalidation => (0, 0, 10, 101),
            BenchKind::Cache => (0, 200, 10, 5),
            BenchKind::Latency => (200, 5_000, 10, 5),
            BenchKind::Torture => (20, 20, 30, 7),
            BenchKind::Ideal => (1, 0, 30, 5),
        };
        BenchSpec {
            bench,
            lock,
            threads: 1,
            mode: Mode::Timed(Duration::from_secs(secs)),
            cs_steps,
            ncs_max,
            pool_size: 64,
            array_len: 4096,
            threshold: 1,
            seed: crate::prng::DEFAULT_SEED,
            runs,
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.threads == 0 {
            return Err(SpecError::ZeroThreads);
        }
        if self.runs == 0 || self.runs.is_multiple_of(2) {
            return Err(SpecError::EvenRuns(self.runs));
        }
        if !self.array_len.is_power_of_two() {
            return Err(SpecError::ArrayNotPowerOfTwo(self.array_len));
        }
        if self.threshold == 0 || (self.array_len > 1 && self.threshold as usize >= self.array_len)
        {
            return Err(SpecError::BadThreshold {
                threshold: self.threshold,
                array_len: self.array_len,
            });
        }
        if self.pool_size == 0 {
            return Err(SpecError::ZeroPool);
        }
        match self.mode {
            Mode::Timed(d) if d.is_zero() => Err(SpecError::ZeroDuration),
            Mode::FixedPerThread(0) => Err(SpecError::ZeroIterations),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    ZeroThreads,
    /// Carried value is the offending run count (even, or zero).
    EvenRuns(u32),
    ArrayNotPowerOfTwo(usize),
    BadThreshold {
        threshold: u32,
        array_len: usize,
    },
    ZeroPool,
    ZeroDuration,
    ZeroIterations,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::ZeroThreads => write!(f, "thread count must be at least 1"),
            SpecError::EvenRuns(n) => {
                write!(
                    f,
                    "run count must be odd so the median is well-defined, got {n}"
                )
            }
            SpecError::ArrayNotPowerOfTwo(n) => {
                write!(f, "waiting-array length must be a power of two, got {n}")
            }
            SpecError::BadThreshold {
                threshold,
                array_len,
            } => write!(
                f,
                "threshold must be ≥ 1 and < array length (array {array_len}, got {threshold})"
            ),
            SpecError::ZeroPool => write!(f, "lock pool size must be at least 1"),
            SpecError::ZeroDuration => write!(f, "timed runs need a nonzero duration"),
            SpecError::ZeroIterations => write!(f, "fixed runs need a nonzero iteration count"),
        }
    }
}

impl std::error::Error for SpecError {}
