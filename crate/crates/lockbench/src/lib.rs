//! Benchmark CLI: expands flags into configurations, runs them, and
//! streams rows to stdout as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 when a runtime invariant fails (the rows
//! gathered so far are still emitted and stderr flags them as partial),
//! 2 on unusable arguments.

pub mod args;
pub mod output;

use args::{Args, FormatArg, Plan};
use harness::benches::{run_bench, BenchOutput, BenchResult};
use output::{records_for, write_csv, write_json, OutputRecord};
use std::io::Write;

/// Re-derives op-count conservation rather than trusting the runner:
/// every run's total must equal the sum of its per-thread counts, with
/// one count per requested thread.
fn conserved(result: &BenchResult) -> bool {
    result
        .runs
        .iter()
        .all(|r| r.conserved() && r.per_thread.len() == result.spec.threads as usize)
}

fn output_conserved(out: &BenchOutput) -> bool {
    match out {
        BenchOutput::Single(result) => conserved(result),
        BenchOutput::Pair {
            shared, private, ..
        } => conserved(shared) && conserved(private),
        BenchOutput::Normalized { result, .. } => conserved(result),
    }
}

/// Runs the plan and writes rows to `out`. Returns the process exit code.
pub fn execute<W: Write, E: Write>(args: &Args, out: W, err: &mut E) -> i32 {
    let Plan { specs, format } = match args.plan() {
        Ok(plan) => plan,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };

    let mut records: Vec<OutputRecord> = Vec::new();
    let mut violated = false;
    for spec in &specs {
        let result = run_bench(spec);
        records.extend(records_for(&result));
        if !output_conserved(&result) {
            let _ = writeln!(
                err,
                "error: op-count conservation violated (bench={} lock={} threads={}); \
                 output is partial",
                spec.bench.name(),
                spec.lock.name(),
                spec.threads
            );
            violated = true;
            break;
        }
    }

    let written = match format {
        FormatArg::Csv => write_csv(&records, out),
        FormatArg::Json => write_json(&records, out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: writing output failed: {e}");
        return 1;
    }
    if violated {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run_cli(argv: &[&str]) -> (i32, String, String) {
        let args = Args::try_parse_from(argv).expect("argv should parse");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = execute(&args, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn fixed_run_emits_per_run_and_median_rows() {
        let (code, out, err) = run_cli(&[
            "lockbench",
            "--bench",
            "mutex",
            "--lock",
            "ticket",
            "--threads",
            "1",
            "--iterations",
            "500",
            "--runs",
            "1",
        ]);
        assert_eq!(code, 0, "stderr: {err}");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3); // header, run 0, median
        assert!(lines[1].contains("mutex,ticket,1,fixed:500"));
        assert!(lines[1].contains(",0,500,"));
        assert!(lines[2].contains(",median,500,"));
    }

    #[test]
    fn sweep_emits_one_block_per_thread_count() {
        let (code, out, _) = run_cli(&[
            "lockbench",
            "--bench",
            "torture",
            "--lock",
            "mcs",
            "--threads-sweep",
            "1,2",
            "--iterations",
            "50",
            "--runs",
            "1",
            "--ncs-max",
            "20",
        ]);
        assert_eq!(code, 0);
        let medians = out.lines().filter(|l| l.contains(",median,")).count();
        assert_eq!(medians, 2);
        assert!(out.contains("torture,mcs,1,"));
        assert!(out.contains("torture,mcs,2,"));
    }

    #[test]
    fn interference_emits_shared_private_and_ratio_rows() {
        let (code, out, _) = run_cli(&[
            "lockbench",
            "--bench",
            "interference",
            "--threads",
            "2",
            "--iterations",
            "200",
            "--runs",
            "1",
            "--pool",
            "8",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("interference,twa-shared,2,"));
        assert!(out.contains("interference,twa-private,2,"));
        assert!(out.contains(",ratio,0,"));
    }

    #[test]
    fn ideal_emits_a_fraction_row_of_exactly_one_at_a_single_thread() {
        let (code, out, _) = run_cli(&[
            "lockbench",
            "--bench",
            "ideal",
            "--threads",
            "1",
            "--iterations",
            "1000",
            "--runs",
            "1",
        ]);
        assert_eq!(code, 0);
        let fraction = out.lines().find(|l| l.contains(",fraction,")).unwrap();
        assert!(fraction.ends_with(",fraction,0,1.0"), "{fraction}");
    }

    #[test]
    fn json_format_round_trips_the_same_rows() {
        let argv_tail = [
            "--bench",
            "latency",
            "--lock",
            "twaid",
            "--threads",
            "1",
            "--iterations",
            "100",
            "--runs",
            "1",
            "--seed",
            "7",
        ];
        let mut csv_argv = vec!["lockbench"];
        csv_argv.extend_from_slice(&argv_tail);
        let mut json_argv = csv_argv.clone();
        json_argv.extend_from_slice(&["--format", "json"]);

        let (_, csv_out, _) = run_cli(&csv_argv);
        let (code, json_out, _) = run_cli(&json_argv);
        assert_eq!(code, 0);

        let from_csv: Vec<OutputRecord> = csv::Reader::from_reader(csv_out.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        let from_json: Vec<OutputRecord> = serde_json::from_str(&json_out).unwrap();
        // Fixed-iteration totals are deterministic; rates are wall-clock.
        for (a, b) in from_csv.iter().zip(&from_json) {
            assert_eq!(a.total_ops, b.total_ops);
            assert_eq!(
                (a.bench.as_str(), a.lock.as_str()),
                (b.bench.as_str(), b.lock.as_str())
            );
            assert_eq!(a.run, b.run);
        }
    }

    #[test]
    fn bad_flag_combinations_exit_2_without_output() {
        let (code, out, err) = run_cli(&[
            "lockbench",
            "--bench",
            "mutex",
            "--threads",
            "0",
            "--iterations",
            "10",
        ]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.starts_with("error: "));
    }

    #[test]
    fn invalidation_ignores_lock_and_labels_rows_none() {
        let (code, out, _) = run_cli(&[
            "lockbench",
            "--bench",
            "invalidation",
            "--lock",
            "mcs",
            "--threads",
            "2",
            "--iterations",
            "2000",
            "--runs",
            "1",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("invalidation,none,2,"));
    }
}
