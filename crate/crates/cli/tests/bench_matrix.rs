//! The bench harness against the worked sample log: verdict agreement
//! across encodings, row layout, and the parallel mode.

use std::fs;

use complog_cli::bench::{run_bench, BenchConfig};
use complog_core::encoders::EncodingKind;
use complog_core::event_log::{parse_event_log, ColumnConfig, EventLog};
use complog_core::rules::{parse_rules, Rule};

const SAMPLE_LOG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/sample_log.csv");
const SAMPLE_RULES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/rules_sample.txt");

fn sample() -> (EventLog, Vec<Rule>) {
    let log = parse_event_log(
        fs::File::open(SAMPLE_LOG).unwrap(),
        &ColumnConfig::default(),
    )
    .unwrap();
    let rules = parse_rules(&fs::read_to_string(SAMPLE_RULES).unwrap()).unwrap();
    (log, rules)
}

#[test]
fn verdicts_are_encoding_invariant_column_wise() {
    let (log, rules) = sample();
    let config = BenchConfig {
        encodings: EncodingKind::ALL.to_vec(),
        rules: rules.clone(),
        repetitions: 2,
        parallel: false,
    };
    let rows = run_bench(&log, "sample", &config).unwrap();
    assert_eq!(rows.len(), 3);

    for row in &rows {
        assert_eq!(row.rules.len(), rules.len());
        assert_eq!(row.cases, 3);
        assert!(row.load.sizes_match());
        assert_eq!(row.nodes, row.load.actual.num_nodes);
        for (stat, rule) in row.rules.iter().zip(&rules) {
            assert_eq!(stat.rule, rule.to_string());
        }
    }
    for i in 0..rules.len() {
        let counts: Vec<(usize, usize)> =
            rows.iter().map(|r| (r.rules[i].violations, r.rules[i].violating_cases)).collect();
        assert_eq!(counts[0], counts[1], "rule {i}");
        assert_eq!(counts[0], counts[2], "rule {i}");
    }
    // spot-check the first rule's verdict: every E in cases 2 and 3 lacks a B
    assert_eq!(rows[0].rules[0].violations, 3);
    assert_eq!(rows[0].rules[0].violating_cases, 2);
}

#[test]
fn parallel_mode_doubles_the_rows_without_changing_verdicts() {
    let (log, rules) = sample();
    let config = BenchConfig {
        encodings: EncodingKind::ALL.to_vec(),
        rules,
        repetitions: 1,
        parallel: true,
    };
    let rows = run_bench(&log, "sample", &config).unwrap();
    assert_eq!(rows.len(), 6);
    for kind in EncodingKind::ALL {
        let pair: Vec<_> = rows.iter().filter(|r| r.encoding == kind).collect();
        assert_eq!(pair.len(), 2);
        assert_ne!(pair[0].parallel, pair[1].parallel);
        for (a, b) in pair[0].rules.iter().zip(&pair[1].rules) {
            assert_eq!(a.violations, b.violations);
            assert_eq!(a.violating_cases, b.violating_cases);
        }
    }
}
