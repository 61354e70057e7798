//! Result rows and their CSV/JSON encodings.
//!
//! One row per run plus one `median` summary row per configuration; the
//! interference benchmark adds a `ratio` row (shared/private median
//! throughput) and the ideal-scalability benchmark a `fraction` row.
//! Dimensionless summary values ride in the `ops_per_sec` column, which
//! is also the only column carrying wall-clock-dependent data — strip it
//! and equal-seed fixed-iteration outputs are byte-identical.

use harness::benches::{BenchOutput, BenchResult};
use harness::spec::BenchSpec;
use serde::{Deserialize, Serialize};
use std::io;

/// Column order is the CSV contract: bench,lock,threads,mode,param,run,
/// total_ops,ops_per_sec. JSON uses the same field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub bench: String,
    pub lock: String,
    pub threads: u32,
    /// `timed:<secs>s` or `fixed:<per-thread iterations>`.
    pub mode: String,
    /// Echo of the remaining knobs, `key=value` joined with `;`.
    pub param: String,
    /// Run index, or one of `median`, `ratio`, `fraction`.
    pub run: String,
    pub total_ops: u64,
    pub ops_per_sec: f64,
}

fn param_echo(spec: &BenchSpec) -> String {
    format!(
        "cs={};ncs={};pool={};array={};threshold={};seed={}",
        spec.cs_steps, spec.ncs_max, spec.pool_size, spec.array_len, spec.threshold, spec.seed
    )
}

/// Exact median of an odd-length list of run totals.
fn median_u64(values: &[u64]) -> u64 {
    assert!(values.len() % 2 == 1);
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted[sorted.len() / 2]
}

fn result_rows(result: &BenchResult, rows: &mut Vec<OutputRecord>) {
    let spec = &result.spec;
    let base = OutputRecord {
        bench: spec.bench.name().to_string(),
        lock: result.label.clone(),
        threads: spec.threads,
        mode: spec.mode.label(),
        param: param_echo(spec),
        run: String::new(),
        total_ops: 0,
        ops_per_sec: 0.0,
    };
    for (i, run) in result.runs.iter().enumerate() {
        rows.push(OutputRecord {
            run: i.to_string(),
            total_ops: run.total,
            ops_per_sec: run.ops_per_sec(),
            ..base.clone()
        });
    }
    let totals: Vec<u64> = result.runs.iter().map(|r| r.total).collect();
    rows.push(OutputRecord {
        run: "median".into(),
        total_ops: median_u64(&totals),
        ops_per_sec: result.median_ops_per_sec,
        ..base
    });
}

/// Flattens a benchmark outcome into output rows.
pub fn records_for(output: &BenchOutput) -> Vec<OutputRecord> {
    let mut rows = Vec::new();
    match output {
        BenchOutput::Single(result) => result_rows(result, &mut rows),
        BenchOutput::Pair {
            shared,
            private,
            ratio,
        } => {
            result_rows(shared, &mut rows);
            result_rows(private, &mut rows);
            rows.push(OutputRecord {
                bench: shared.spec.bench.name().into(),
                lock: "twa".into(),
                threads: shared.spec.threads,
                mode: shared.spec.mode.label(),
                param: param_echo(&shared.spec),
                run: "ratio".into(),
                total_ops: 0,
                ops_per_sec: *ratio,
            });
        }
        BenchOutput::Normalized { result, fraction } => {
            result_rows(result, &mut rows);
            rows.push(OutputRecord {
                bench: result.spec.bench.name().into(),
                lock: result.label.clone(),
                threads: result.spec.threads,
                mode: result.spec.mode.label(),
                param: param_echo(&result.spec),
                run: "fraction".into(),
                total_ops: 0,
                ops_per_sec: *fraction,
            });
        }
    }
    rows
}

pub fn write_csv<W: io::Write>(records: &[OutputRecord], w: W) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in records {
        csv.serialize(r)?;
    }
    csv.flush()
}

pub fn write_json<W: io::Write>(records: &[OutputRecord], mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, records)?;
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(run: &str, ops: u64, rate: f64) -> OutputRecord {
        OutputRecord {
            bench: "mutex".into(),
            lock: "twa".into(),
            threads: 4,
            mode: "fixed:1000".into(),
            param: "cs=4;ncs=200;pool=64;array=4096;threshold=1;seed=5489".into(),
            run: run.into(),
            total_ops: ops,
            ops_per_sec: rate,
        }
    }

    #[test]
    fn csv_round_trips_and_has_the_contract_header() {
        let records = vec![
            sample("0", 4000, 123456.75),
            sample("median", 4000, 123000.5),
        ];
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(
            text.starts_with("bench,lock,threads,mode,param,run,total_ops,ops_per_sec\n"),
            "{text}"
        );
        let back: Vec<OutputRecord> = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn json_round_trips_with_identical_values() {
        let records = vec![sample("0", 1, 0.5), sample("ratio", 0, 0.9875)];
        let mut buf = Vec::new();
        write_json(&records, &mut buf).unwrap();
        let back: Vec<OutputRecord> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn median_of_totals_is_exact() {
        assert_eq!(median_u64(&[3]), 3);
        assert_eq!(median_u64(&[1, 2, 3]), 2);
        assert_eq!(median_u64(&[5, 1, 9, 3, 7]), 5);
    }
}
