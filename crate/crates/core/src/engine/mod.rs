//! Compliance checking over encoded logs.
//!
//! Each encoding gets the evaluation strategy its shape suggests:
//!
//! * the baseline encoding pulls trigger events from the property index and
//!   walks `Directly_follows` chains ([`chain`]);
//! * the explicit-position encoding looks candidates up by activity and
//!   compares `position`/`timestamp` properties ([`positional`]);
//! * the unique-activities encoding scans the one activity node's edges,
//!   grouped by case, and reuses the positional comparison ([`positional`]).
//!
//! All strategies produce the same canonical result for the same log and
//! rule — byte-for-byte identical witness lists — which
//! [`crate::oracle::oracle_check`] reproduces a fourth way from the raw log.
//! A violation is witnessed once per trigger event (the `a` event for
//! RESPONSE and EXCLUDE, the `b` event for PRECEDES), with a deterministic
//! detail event for context: the nearest candidate that failed the window,
//! or the first intervening excluded event.

mod chain;
mod positional;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::encoders::{EncodedLog, EncodingKind};
use crate::lpg::{Graph, KeyId};
use crate::rules::{Rule, RuleError, RuleKind};

/// A specific event, pinned by case and position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EventRef {
    pub case_id: String,
    pub activity: String,
    pub position: u32,
    pub timestamp: i64,
}

/// One rule violation: the event that triggered the check plus a detail
/// event explaining it — for RESPONSE the first `b` after the trigger (if
/// any), for PRECEDES the latest `a` not after it (if any), for EXCLUDE the
/// first intervening excluded event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub trigger: EventRef,
    pub detail: Option<EventRef>,
}

fn duration_secs<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// The outcome of checking one rule: all witnesses sorted by
/// (case id, trigger position), the distinct violating case ids, and the
/// wall-clock cost of the check.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub rule: Rule,
    /// `None` when the report came from the reference checker rather than an
    /// encoded graph.
    pub encoding: Option<EncodingKind>,
    pub violations: Vec<Witness>,
    /// Sorted, deduplicated case ids of the violating triggers.
    pub case_ids: Vec<String>,
    #[serde(rename = "check_secs", serialize_with = "duration_secs")]
    pub elapsed: Duration,
}

impl ViolationReport {
    pub fn num_violations(&self) -> usize {
        self.violations.len()
    }

    pub fn is_compliant(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Canonical ordering and case-id digest; every strategy funnels through
/// here so reports compare exactly.
pub(crate) fn assemble_report(
    rule: &Rule,
    encoding: Option<EncodingKind>,
    mut violations: Vec<Witness>,
    elapsed: Duration,
) -> ViolationReport {
    violations.sort_by(|x, y| {
        (x.trigger.case_id.as_str(), x.trigger.position)
            .cmp(&(y.trigger.case_id.as_str(), y.trigger.position))
    });
    let case_ids: Vec<String> = violations
        .iter()
        .map(|w| w.trigger.case_id.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ViolationReport { rule: rule.clone(), encoding, violations, case_ids, elapsed }
}

/// Check one rule against an encoded log.
pub fn check(encoded: &EncodedLog, rule: &Rule) -> Result<ViolationReport, RuleError> {
    check_with(encoded, rule, false)
}

/// [`check`], optionally fanning the evaluation out across threads. The
/// report is identical either way.
pub fn check_with(
    encoded: &EncodedLog,
    rule: &Rule,
    parallel: bool,
) -> Result<ViolationReport, RuleError> {
    let start = Instant::now();
    let witnesses = match encoded.kind {
        EncodingKind::Bm => chain::check_bm(encoded, rule, parallel)?,
        EncodingKind::Ep => positional::check_ep(encoded, rule, parallel)?,
        EncodingKind::Ua => positional::check_ua(encoded, rule, parallel)?,
    };
    Ok(assemble_report(rule, Some(encoded.kind), witnesses, start.elapsed()))
}

/// Check a batch of rules, returning one report per rule in input order.
pub fn check_all(encoded: &EncodedLog, rules: &[Rule]) -> Result<Vec<ViolationReport>, RuleError> {
    rules.iter().map(|rule| check(encoded, rule)).collect()
}

/// Pretty JSON for one report.
pub fn report_to_json(report: &ViolationReport) -> String {
    serde_json::to_string_pretty(report).expect("reports contain no unserializable values")
}

/// Pretty JSON array for a batch of reports.
pub fn reports_to_json(reports: &[ViolationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports contain no unserializable values")
}

/// One CSV line per witness: `case_id,rule,trigger_activity,trigger_position`.
pub fn reports_to_csv(reports: &[ViolationReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["case_id", "rule", "trigger_activity", "trigger_position"])
        .expect("writing to a Vec cannot fail");
    for report in reports {
        let rule = report.rule.to_string();
        for witness in &report.violations {
            w.write_record([
                witness.trigger.case_id.as_str(),
                rule.as_str(),
                witness.trigger.activity.as_str(),
                &witness.trigger.position.to_string(),
            ])
            .expect("writing to a Vec cannot fail");
        }
    }
    String::from_utf8(w.into_inner().expect("csv writer flushes into the Vec"))
        .expect("csv output is UTF-8")
}

/// [`reports_to_csv`] for a single report.
pub fn report_to_csv(report: &ViolationReport) -> String {
    reports_to_csv(std::slice::from_ref(report))
}

/// The event whose occurrences trigger the check.
fn trigger_activity(rule: &Rule) -> &str {
    match rule.kind {
        RuleKind::Response | RuleKind::Exclude => &rule.a,
        RuleKind::Precedes => &rule.b,
    }
}

/// The event looked for to discharge (RESPONSE/PRECEDES) or condemn
/// (EXCLUDE) the trigger.
fn candidate_activity(rule: &Rule) -> &str {
    match rule.kind {
        RuleKind::Response | RuleKind::Exclude => &rule.b,
        RuleKind::Precedes => &rule.a,
    }
}

/// Property keys every encoding writes, resolved once per check. `None`
/// means the graph holds no events at all.
struct Keys {
    id: KeyId,
    activity: KeyId,
    position: KeyId,
    timestamp: KeyId,
}

impl Keys {
    fn resolve(graph: &Graph) -> Option<Self> {
        Some(Keys {
            id: graph.key_id(crate::encoders::ID_KEY)?,
            activity: graph.key_id(crate::encoders::ACTIVITY_KEY)?,
            position: graph.key_id(crate::encoders::POSITION_KEY)?,
            timestamp: graph.key_id(crate::encoders::TIMESTAMP_KEY)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::encode;
    use crate::event_log::{EventLog, EventRow};
    use crate::oracle::oracle_check;
    use crate::rules::{parse_rule, TimeDelta, TimeWindow};

    fn sample_log() -> EventLog {
        let rows = [
            ("1", "A", 1612373652),
            ("1", "B", 1612458012),
            ("2", "A", 1609866012),
            ("1", "E", 1612778412),
            ("3", "A", 1614682812),
            ("2", "C", 1609866012),
            ("1", "D", 1613131200),
            ("2", "E", 1612026012),
            ("3", "E", 1615374000),
            ("3", "C", 1615374012),
            ("2", "D", 1612346400),
            ("3", "E", 1615719600),
            ("3", "D", 1615640412),
        ];
        EventLog::from_rows(rows.iter().map(|&(case, act, ts)| EventRow::new(case, act, ts)))
            .unwrap()
    }

    fn case_set(src: &str, log: &EventLog) -> Vec<String> {
        let rule = parse_rule(src).unwrap();
        let mut sets = Vec::new();
        for kind in EncodingKind::ALL {
            let encoded = encode(log, kind).unwrap();
            sets.push(check(&encoded, &rule).unwrap().case_ids);
        }
        sets.push(oracle_check(log, &rule).unwrap().case_ids);
        for s in &sets[1..] {
            assert_eq!(s, &sets[0], "{src}: all strategies must agree");
        }
        sets.into_iter().next().unwrap()
    }

    #[test]
    fn worked_example_verdicts() {
        let log = sample_log();
        assert_eq!(case_set("PRECEDES(B, E)", &log), ["2", "3"]);
        assert_eq!(case_set("PRECEDES(B, E) TIME <= 200000s", &log), ["1", "2", "3"]);
        assert!(case_set("RESPONSE(A, E)", &log).is_empty());
        assert_eq!(case_set("EXCLUDE(A, D, [E])", &log), ["1", "2", "3"]);
        assert_eq!(case_set("RESPONSE(A, B)", &log), ["2", "3"]);
    }

    #[test]
    fn witness_details_are_canonical() {
        let log = sample_log();
        let rule = parse_rule("RESPONSE(A, B)").unwrap();
        let encoded = encode(&log, EncodingKind::Ua).unwrap();
        let report = check(&encoded, &rule).unwrap();
        assert_eq!(report.violations.len(), 2);
        // Cases 2 and 3 have no B at all; the triggers are their A events
        // and there is no candidate to point at.
        let w = &report.violations[0];
        assert_eq!((w.trigger.case_id.as_str(), w.trigger.position), ("2", 1));
        assert_eq!(w.detail, None);

        let rule = parse_rule("PRECEDES(B, E) TIME <= 200000s").unwrap();
        let report = check(&encoded, &rule).unwrap();
        assert_eq!(report.case_ids, ["1", "2", "3"]);
        assert_eq!(report.violations.len(), 4);
        // Case 1's E does have a B before it, but 320,400 s elapsed misses
        // the window; the detail names that nearest failing candidate.
        let w = &report.violations[0];
        assert_eq!(
            (w.trigger.case_id.as_str(), w.trigger.activity.as_str(), w.trigger.position),
            ("1", "E", 3)
        );
        let d = w.detail.as_ref().unwrap();
        assert_eq!((d.activity.as_str(), d.position), ("B", 2));
        assert_eq!(w.trigger.timestamp - d.timestamp, 320_400);
        // Cases 2 and 3 never execute B: violation without a candidate.
        assert!(report.violations[1..].iter().all(|w| w.detail.is_none()));
    }

    #[test]
    fn absent_activities() {
        let log = sample_log();
        for kind in EncodingKind::ALL {
            let encoded = encode(&log, kind).unwrap();
            // No trigger events: trivially compliant.
            let rule = parse_rule("RESPONSE(Z, B)").unwrap();
            assert!(check(&encoded, &rule).unwrap().is_compliant());
            // Triggers exist but the response activity never occurs.
            let rule = parse_rule("RESPONSE(A, Z)").unwrap();
            let report = check(&encoded, &rule).unwrap();
            assert_eq!(report.case_ids, ["1", "2", "3"]);
            // Every E lacks a preceding Z.
            let rule = parse_rule("PRECEDES(Z, E)").unwrap();
            assert_eq!(check(&encoded, &rule).unwrap().case_ids, ["1", "2", "3"]);
            // Excluded activity never occurs: compliant.
            let rule = parse_rule("EXCLUDE(A, D, [Z])").unwrap();
            assert!(check(&encoded, &rule).unwrap().is_compliant());
        }
    }

    #[test]
    fn same_activity_on_both_sides() {
        // Two E events in a row: E at 10 and E at 20.
        let rows = [
            ("c", "E", 10),
            ("c", "E", 20),
            ("c", "X", 30),
        ];
        let log =
            EventLog::from_rows(rows.iter().map(|&(c, a, t)| EventRow::new(c, a, t))).unwrap();
        // RESPONSE(E, E): the second E has no later E, so it violates.
        let rule = parse_rule("RESPONSE(E, E)").unwrap();
        for kind in EncodingKind::ALL {
            let encoded = encode(&log, kind).unwrap();
            let report = check(&encoded, &rule).unwrap();
            assert_eq!(report.violations.len(), 1, "{kind}");
            assert_eq!(report.violations[0].trigger.position, 2, "{kind}");
        }
        let report = oracle_check(&log, &rule).unwrap();
        assert_eq!(report.violations.len(), 1);
        // PRECEDES(E, E): every E discharges its own precondition at zero
        // elapsed time under the default window.
        let rule = parse_rule("PRECEDES(E, E)").unwrap();
        for kind in EncodingKind::ALL {
            let encoded = encode(&log, kind).unwrap();
            assert!(check(&encoded, &rule).unwrap().is_compliant(), "{kind}");
        }
        // ... but not under TIME > 5s: the first E has no earlier E far
        // enough back.
        let rule = parse_rule("PRECEDES(E, E) TIME > 5s").unwrap();
        for kind in EncodingKind::ALL {
            let encoded = encode(&log, kind).unwrap();
            let report = check(&encoded, &rule).unwrap();
            assert_eq!(report.violations.len(), 1, "{kind}");
            assert_eq!(report.violations[0].trigger.position, 1, "{kind}");
            // The nearest not-later E is the event itself.
            assert_eq!(report.violations[0].detail.as_ref().unwrap().position, 1);
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let log = sample_log();
        for src in ["RESPONSE(A, E) TIME < 500000s", "PRECEDES(B, E)", "EXCLUDE(A, D, [E, C])"] {
            let rule = parse_rule(src).unwrap();
            for kind in EncodingKind::ALL {
                let encoded = encode(&log, kind).unwrap();
                let serial = check_with(&encoded, &rule, false).unwrap();
                let par = check_with(&encoded, &rule, true).unwrap();
                assert_eq!(serial.violations, par.violations, "{kind} {src}");
            }
        }
    }

    #[test]
    fn empty_log_is_compliant() {
        let log = EventLog::from_rows([]).unwrap();
        let rule = parse_rule("RESPONSE(A, B) TIME < 10s").unwrap();
        for kind in EncodingKind::ALL {
            let encoded = encode(&log, kind).unwrap();
            let report = check(&encoded, &rule).unwrap();
            assert!(report.is_compliant());
        }
        assert!(oracle_check(&log, &rule).unwrap().is_compliant());
    }

    #[test]
    fn check_all_preserves_rule_order() {
        let log = sample_log();
        let rules = [
            parse_rule("RESPONSE(A, B)").unwrap(),
            parse_rule("RESPONSE(A, B)").unwrap(), // duplicates are fine
            parse_rule("PRECEDES(B, E)").unwrap(),
        ];
        let encoded = encode(&log, EncodingKind::Ep).unwrap();
        let reports = check_all(&encoded, &rules).unwrap();
        assert_eq!(reports.len(), 3);
        assert_eq!(reports[0].rule, rules[0]);
        assert_eq!(reports[0].case_ids, reports[1].case_ids);
        assert_eq!(reports[2].rule, rules[2]);
    }

    #[test]
    fn infinite_gt_window_rejects_everything() {
        let log = sample_log();
        // TIME > INFINITE is unsatisfiable, so every trigger violates.
        let rule = Rule::response("A", "E", TimeWindow::new(TimeDelta::Infinite, crate::rules::Theta::Gt))
            .unwrap();
        for kind in EncodingKind::ALL {
            let encoded = encode(&log, kind).unwrap();
            assert_eq!(check(&encoded, &rule).unwrap().case_ids, ["1", "2", "3"]);
        }
        assert_eq!(oracle_check(&log, &rule).unwrap().case_ids, ["1", "2", "3"]);
    }

    #[test]
    fn csv_and_json_shapes() {
        let log = sample_log();
        let rule = parse_rule("RESPONSE(A, B)").unwrap();
        let encoded = encode(&log, EncodingKind::Bm).unwrap();
        let report = check(&encoded, &rule).unwrap();
        let csv = report_to_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("case_id,rule,trigger_activity,trigger_position"));
        assert_eq!(lines.next(), Some("2,\"RESPONSE(A, B)\",A,1"));
        assert_eq!(lines.next(), Some("3,\"RESPONSE(A, B)\",A,1"));
        assert_eq!(lines.next(), None);
        let json: serde_json::Value = serde_json::from_str(&report_to_json(&report)).unwrap();
        assert_eq!(json["encoding"], "bm");
        assert_eq!(json["rule"]["text"], "RESPONSE(A, B)");
        assert_eq!(json["case_ids"], serde_json::json!(["2", "3"]));
        assert_eq!(json["violations"][0]["trigger"]["case_id"], "2");
        assert!(json["check_secs"].as_f64().unwrap() >= 0.0);
    }
}
