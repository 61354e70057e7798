//! Command-line surface: flags, defaults, and validation.
//!
//! Flags left unset fall back to the selected benchmark's defaults (see
//! [`BenchSpec::with_defaults`]); `--threads-sweep` expands one flag into
//! several configurations. Validation failures are usage errors: the
//! process exits with code 2.

use clap::{Parser, ValueEnum};
use harness::spec::{BenchKind, BenchSpec, LockKind, Mode};
use std::time::Duration;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum BenchArg {
    Mutex,
    Interference,
    Invalidation,
    Cache,
    Latency,
    Torture,
    Ideal,
}

impl From<BenchArg> for BenchKind {
    fn from(b: BenchArg) -> BenchKind {
        match b {
            BenchArg::Mutex => BenchKind::Mutex,
            BenchArg::Interference => BenchKind::Interference,
            BenchArg::Invalidation => BenchKind::Invalidation,
            BenchArg::Cache => BenchKind::Cache,
            BenchArg::Latency => BenchKind::Latency,
            BenchArg::Torture => BenchKind::Torture,
            BenchArg::Ideal => BenchKind::Ideal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum LockArg {
    Ticket,
    Twa,
    Mcs,
    Tktdual,
    Twaid,
    Threestage,
    Tas,
}

impl From<LockArg> for LockKind {
    fn from(l: LockArg) -> LockKind {
        match l {
            LockArg::Ticket => LockKind::Ticket,
            LockArg::Twa => LockKind::Twa,
            LockArg::Mcs => LockKind::Mcs,
            LockArg::Tktdual => LockKind::TktDual,
            LockArg::Twaid => LockKind::TwaId,
            LockArg::Threestage => LockKind::ThreeStage,
            LockArg::Tas => LockKind::Tas,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Lock contention microbenchmarks with machine-readable output.
#[derive(Parser, Debug)]
#[command(name = "lockbench", version, about)]
pub struct Args {
    /// Benchmark to run
    #[arg(long, value_enum)]
    pub bench: BenchArg,

    /// Lock implementation under test. The interference benchmark always
    /// measures the waiting-array lock, and invalidation/ideal use no
    /// lock at all; those three ignore this flag.
    #[arg(long, value_enum, default_value = "twa")]
    pub lock: LockArg,

    /// Worker thread count
    #[arg(long, conflicts_with = "threads_sweep")]
    pub threads: Option<u32>,

    /// Comma-separated thread counts; emits one configuration block each
    #[arg(long, value_delimiter = ',')]
    pub threads_sweep: Option<Vec<u32>>,

    /// Seconds per run (timed mode; fractional values allowed)
    #[arg(long, conflicts_with = "iterations")]
    pub duration: Option<f64>,

    /// Per-thread iterations (fixed mode; deterministic)
    #[arg(long)]
    pub iterations: Option<u64>,

    /// Critical-section PRNG steps
    #[arg(long)]
    pub cs_steps: Option<u32>,

    /// Non-critical delay parameter (per-benchmark meaning: exclusive
    /// draw bound, inclusive draw bound, or fixed step count)
    #[arg(long)]
    pub ncs_max: Option<u32>,

    /// Lock pool size (interference benchmark)
    #[arg(long)]
    pub pool: Option<u32>,

    /// Waiting-array length; must be a power of two
    #[arg(long)]
    pub array_size: Option<usize>,

    /// Long-term waiting threshold (waiting-array locks)
    #[arg(long)]
    pub threshold: Option<u32>,

    /// Runs per configuration; must be odd
    #[arg(long)]
    pub runs: Option<u32>,

    /// Base PRNG seed; thread i uses seed + i
    #[arg(long)]
    pub seed: Option<u32>,

    /// Output encoding for standard output
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
}

/// Everything `execute` needs: one spec per requested thread count.
#[derive(Debug)]
pub struct Plan {
    pub specs: Vec<BenchSpec>,
    pub format: FormatArg,
}

impl Args {
    /// Expands the flags into validated benchmark specs.
    pub fn plan(&self) -> Result<Plan, String> {
        let thread_counts = match (&self.threads, &self.threads_sweep) {
            (_, Some(sweep)) if !sweep.is_empty() => sweep.clone(),
            (_, Some(_)) => return Err("--threads-sweep needs at least one count".into()),
            (Some(t), None) => vec![*t],
            (None, None) => vec![1],
        };

        let mut specs = Vec::with_capacity(thread_counts.len());
        for &threads in &thread_counts {
            let mut spec =
                BenchSpec::with_defaults(BenchKind::from(self.bench), LockKind::from(self.lock));
            spec.threads = threads;
            if let Some(secs) = self.duration {
                if !secs.is_finite() || secs <= 0.0 {
                    return Err(format!("--duration must be a positive number, got {secs}"));
                }
                spec.mode = Mode::Timed(Duration::from_secs_f64(secs));
            } else if let Some(iters) = self.iterations {
                spec.mode = Mode::FixedPerThread(iters);
            }
            if let Some(v) = self.cs_steps {
                spec.cs_steps = v;
            }
            if let Some(v) = self.ncs_max {
                spec.ncs_max = v;
            }
            if let Some(v) = self.pool {
                spec.pool_size = v;
            }
            if let Some(v) = self.array_size {
                spec.array_len = v;
            }
            if let Some(v) = self.threshold {
                spec.threshold = v;
            }
            if let Some(v) = self.runs {
                spec.runs = v;
            }
            if let Some(v) = self.seed {
                spec.seed = v;
            }
            spec.validate().map_err(|e| e.to_string())?;
            specs.push(spec);
        }
        Ok(Plan {
            specs,
            format: self.format,
        })
    }
}
