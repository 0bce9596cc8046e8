//! Benchmark matrix: build each requested encoding once, time every rule
//! over repeated runs, and cross-check that all encodings agree on the
//! violating cases.

use std::collections::BTreeSet;
use std::time::Duration;

use complog_core::encoders::{encode_with_report, EncodeError, EncodingKind, LoadingReport};
use complog_core::engine::check_with;
use complog_core::event_log::EventLog;
use complog_core::rules::{Rule, RuleError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub encodings: Vec<EncodingKind>,
    pub rules: Vec<Rule>,
    /// Timed runs per rule; an extra untimed warm-up run precedes them.
    pub repetitions: usize,
    /// Also measure case-partitioned evaluation, reported as separate rows.
    pub parallel: bool,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("no encodings selected")]
    NoEncodings,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    /// The whole point of interchangeable encodings is that this never
    /// happens; treat it as a fatal defect, not a data point.
    #[error(
        "encodings disagree on `{rule}`: cases {divergent:?} are flagged by exactly one of {lhs} and {rhs}"
    )]
    Disagreement {
        rule: String,
        lhs: EncodingKind,
        rhs: EncodingKind,
        divergent: Vec<String>,
    },
}

/// Timing and verdict for one rule on one row's encoding.
#[derive(Debug, Clone, Serialize)]
pub struct RuleStats {
    pub rule: String,
    pub violations: usize,
    pub violating_cases: usize,
    pub median_secs: f64,
    pub mean_secs: f64,
}

/// One benchmark row: a (log, encoding, evaluation mode) triple with its
/// graph shape, loading report and per-rule measurements.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub log: String,
    pub encoding: EncodingKind,
    pub parallel: bool,
    pub cases: usize,
    pub nodes: usize,
    pub edges: usize,
    pub avg_degree: f64,
    pub load: LoadingReport,
    pub rules: Vec<RuleStats>,
}

pub fn run_bench(
    log: &EventLog,
    log_name: &str,
    config: &BenchConfig,
) -> Result<Vec<BenchRow>, BenchError> {
    if config.repetitions == 0 {
        return Err(BenchError::NoRepetitions);
    }
    if config.encodings.is_empty() {
        return Err(BenchError::NoEncodings);
    }

    // Verdict of the first encoding per rule; later encodings must match.
    let mut reference: Vec<Option<(BTreeSet<String>, EncodingKind)>> =
        vec![None; config.rules.len()];
    let modes: &[bool] = if config.parallel { &[false, true] } else { &[false] };

    let mut rows = Vec::new();
    for &kind in &config.encodings {
        let (encoded, load) = encode_with_report(log, kind)?;
        let stats = encoded.stats();
        for &parallel in modes {
            let mut rule_stats = Vec::with_capacity(config.rules.len());
            for (i, rule) in config.rules.iter().enumerate() {
                let mut timings = Vec::with_capacity(config.repetitions);
                let mut report = check_with(&encoded, rule, parallel)?; // warm-up
                for _ in 0..config.repetitions {
                    report = check_with(&encoded, rule, parallel)?;
                    timings.push(report.elapsed);
                }

                let ids: BTreeSet<String> = report.case_ids.iter().cloned().collect();
                match &reference[i] {
                    None => reference[i] = Some((ids, kind)),
                    Some((expected, source)) if *expected != ids => {
                        return Err(BenchError::Disagreement {
                            rule: rule.to_string(),
                            lhs: *source,
                            rhs: kind,
                            divergent: expected.symmetric_difference(&ids).cloned().collect(),
                        });
                    }
                    Some(_) => {}
                }

                rule_stats.push(RuleStats {
                    rule: rule.to_string(),
                    violations: report.num_violations(),
                    violating_cases: report.case_ids.len(),
                    median_secs: median_secs(&timings),
                    mean_secs: mean_secs(&timings),
                });
            }
            rows.push(BenchRow {
                log: log_name.to_string(),
                encoding: kind,
                parallel,
                cases: log.num_cases(),
                nodes: stats.num_nodes,
                edges: stats.num_edges,
                avg_degree: stats.avg_degree,
                load: load.clone(),
                rules: rule_stats,
            });
        }
    }
    Ok(rows)
}

fn median_secs(samples: &[Duration]) -> f64 {
    let mut secs: Vec<f64> = samples.iter().map(Duration::as_secs_f64).collect();
    secs.sort_by(f64::total_cmp);
    let n = secs.len();
    match n {
        0 => 0.0,
        n if n % 2 == 1 => secs[n / 2],
        _ => (secs[n / 2 - 1] + secs[n / 2]) / 2.0,
    }
}

fn mean_secs(samples: &[Duration]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(Duration::as_secs_f64).sum::<f64>() / samples.len() as f64
}

pub fn rows_to_json(rows: &[BenchRow]) -> String {
    serde_json::to_string_pretty(rows).expect("bench rows serialize")
}

/// Flat CSV: one record per (row, rule) pair.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "log",
        "encoding",
        "parallel",
        "cases",
        "nodes",
        "edges",
        "avg_degree",
        "load_secs",
        "rule",
        "violations",
        "violating_cases",
        "median_secs",
        "mean_secs",
    ])
    .expect("writing to a Vec cannot fail");
    for row in rows {
        for rule in &row.rules {
            wtr.write_record([
                row.log.clone(),
                row.encoding.to_string(),
                row.parallel.to_string(),
                row.cases.to_string(),
                row.nodes.to_string(),
                row.edges.to_string(),
                format!("{:.4}", row.avg_degree),
                format!("{:.6}", row.load.total.as_secs_f64()),
                rule.rule.clone(),
                rule.violations.to_string(),
                rule.violating_cases.to_string(),
                format!("{:.6}", rule.median_secs),
                format!("{:.6}", rule.mean_secs),
            ])
            .expect("writing to a Vec cannot fail");
        }
    }
    String::from_utf8(wtr.into_inner().expect("no partial flush")).expect("CSV is UTF-8")
}
