//! Reference checker: literal quantifier enumeration over the raw log.
//!
//! No graphs, no indexes, no early exits — each rule's defining formula is
//! transcribed directly over every trace, quadratic in trace length (cubic
//! for EXCLUDE). Slow but easy to audit; the engine strategies are tested
//! against it and must reproduce its reports exactly.

use std::time::Instant;

use crate::engine::{assemble_report, EventRef, ViolationReport, Witness};
use crate::event_log::{Event, EventLog, Trace};
use crate::rules::{theta_satisfied, Rule, RuleError, RuleKind};

/// Evaluate `rule` against the raw log. The report carries no encoding tag.
pub fn oracle_check(log: &EventLog, rule: &Rule) -> Result<ViolationReport, RuleError> {
    let start = Instant::now();
    let mut witnesses = Vec::new();
    for trace in log.traces() {
        scan_trace(trace, rule, &mut witnesses)?;
    }
    Ok(assemble_report(rule, None, witnesses, start.elapsed()))
}

fn scan_trace(trace: &Trace, rule: &Rule, out: &mut Vec<Witness>) -> Result<(), RuleError> {
    let events = &trace.events;
    let theta = rule.window.theta;
    let delta = rule.window.delta_t;
    match rule.kind {
        RuleKind::Response => {
            // e_i with activity a violates unless some *other* e_j with
            // activity b has position(e_j) >= position(e_i) (hence also
            // e_j.t >= e_i.t) within the window.
            for (i, ei) in events.iter().enumerate() {
                if ei.activity != rule.a {
                    continue;
                }
                let mut satisfied = false;
                let mut first_b: Option<&Event> = None;
                for (j, ej) in events.iter().enumerate() {
                    if j == i || ej.activity != rule.b || ej.position < ei.position {
                        continue;
                    }
                    if first_b.is_none_or(|f| ej.position < f.position) {
                        first_b = Some(ej);
                    }
                    if theta_satisfied(theta, ej.timestamp - ei.timestamp, delta)? {
                        satisfied = true;
                    }
                }
                if !satisfied {
                    out.push(witness(ei, first_b));
                }
            }
        }
        RuleKind::Precedes => {
            // e_i with activity b violates unless some e_j with activity a —
            // possibly e_i itself — has position(e_j) <= position(e_i)
            // within the window.
            for ei in events.iter() {
                if ei.activity != rule.b {
                    continue;
                }
                let mut satisfied = false;
                let mut last_a: Option<&Event> = None;
                for ej in events.iter() {
                    if ej.activity != rule.a || ej.position > ei.position {
                        continue;
                    }
                    if last_a.is_none_or(|f| ej.position > f.position) {
                        last_a = Some(ej);
                    }
                    if theta_satisfied(theta, ei.timestamp - ej.timestamp, delta)? {
                        satisfied = true;
                    }
                }
                if !satisfied {
                    out.push(witness(ei, last_a));
                }
            }
        }
        RuleKind::Exclude => {
            // e_i with activity a violates if any pair (e_i, e_j) with
            // activity(e_j) = b, position(e_i) < position(e_j), inside the
            // window, has an excluded e_k strictly between. The witness
            // detail is the earliest intervening event of the earliest
            // violating pair.
            for ei in events.iter() {
                if ei.activity != rule.a {
                    continue;
                }
                let mut first_pair: Option<(&Event, &Event)> = None;
                for ej in events.iter() {
                    if ej.activity != rule.b || ej.position <= ei.position {
                        continue;
                    }
                    if !theta_satisfied(theta, ej.timestamp - ei.timestamp, delta)? {
                        continue;
                    }
                    let mut between: Option<&Event> = None;
                    for ek in events.iter() {
                        if !rule.excluded.contains(&ek.activity) {
                            continue;
                        }
                        if ek.position <= ei.position || ek.position >= ej.position {
                            continue;
                        }
                        if between.is_none_or(|f| ek.position < f.position) {
                            between = Some(ek);
                        }
                    }
                    if let Some(c) = between {
                        if first_pair.is_none_or(|(p, _)| ej.position < p.position) {
                            first_pair = Some((ej, c));
                        }
                    }
                }
                if let Some((_, c)) = first_pair {
                    out.push(witness(ei, Some(c)));
                }
            }
        }
    }
    Ok(())
}

fn witness(trigger: &Event, detail: Option<&Event>) -> Witness {
    Witness { trigger: event_ref(trigger), detail: detail.map(event_ref) }
}

fn event_ref(e: &Event) -> EventRef {
    EventRef {
        case_id: e.case_id.clone(),
        activity: e.activity.clone(),
        position: e.position,
        timestamp: e.timestamp,
    }
}
