//! Position-property strategies.
//!
//! The explicit-position encoding finds event nodes through the activity
//! index and resolves each to its case; the unique-activities encoding takes
//! the one node per activity label and scans its `Event_to_case` edges. Both
//! end up with per-case occurrence lists `(position, timestamp)` sorted by
//! position, and the rule is decided by binary search plus a window scan over
//! those lists — no graph traversal.

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::encoders::{EncodedLog, EncodingKind, ACTIVITY_KEY, ACTIVITY_LABEL, EVENT_LABEL, NAME_KEY};
use crate::lpg::{Graph, KeyId, NodeId, PropertyValue};
use crate::rules::{theta_satisfied, Rule, RuleError, RuleKind};

use super::{candidate_activity, trigger_activity, EventRef, Keys, Witness};

/// One occurrence of an activity within a case.
#[derive(Debug, Clone, Copy)]
struct Occ {
    pos: i64,
    ts: i64,
}

/// An occurrence of an excluded activity; `label` indexes `rule.excluded`.
#[derive(Debug, Clone, Copy)]
struct ExcludedOcc {
    pos: i64,
    ts: i64,
    label: u32,
}

/// Everything one case contributes to one rule evaluation. The case id
/// string is only resolved when a witness is actually emitted; most cases on
/// most rules produce none. Inline capacity covers the typical handful of
/// occurrences per case without touching the allocator.
struct CaseOccs {
    node: NodeId,
    /// Occurrences of the trigger activity, position-sorted.
    triggers: SmallVec<[Occ; 4]>,
    /// Occurrences of the partner activity, position-sorted. Note that for
    /// `a = b` rules this holds the same occurrences as `triggers`.
    candidates: SmallVec<[Occ; 4]>,
    /// Occurrences of the excluded activities (EXCLUDE only), position-sorted.
    excluded: SmallVec<[ExcludedOcc; 2]>,
}

impl CaseOccs {
    fn new(node: NodeId) -> Self {
        CaseOccs {
            node,
            triggers: SmallVec::new(),
            candidates: SmallVec::new(),
            excluded: SmallVec::new(),
        }
    }
}

pub(super) fn check_ep(
    encoded: &EncodedLog,
    rule: &Rule,
    parallel: bool,
) -> Result<Vec<Witness>, RuleError> {
    debug_assert_eq!(encoded.kind, EncodingKind::Ep);
    evaluate(encoded, rule, parallel)
}

pub(super) fn check_ua(
    encoded: &EncodedLog,
    rule: &Rule,
    parallel: bool,
) -> Result<Vec<Witness>, RuleError> {
    debug_assert_eq!(encoded.kind, EncodingKind::Ua);
    evaluate(encoded, rule, parallel)
}

fn evaluate(encoded: &EncodedLog, rule: &Rule, parallel: bool) -> Result<Vec<Witness>, RuleError> {
    let g = &encoded.graph;
    let Some(keys) = Keys::resolve(g) else {
        return Ok(Vec::new()); // no events were ever encoded
    };
    let cases = gather(encoded, &keys, rule);
    if parallel {
        let nested: Vec<Vec<Witness>> = cases
            .par_iter()
            .map(|case| eval_case(g, keys.id, rule, case))
            .collect::<Result<_, _>>()?;
        Ok(nested.into_iter().flatten().collect())
    } else {
        let mut out = Vec::new();
        for case in &cases {
            out.extend(eval_case(g, keys.id, rule, case)?);
        }
        Ok(out)
    }
}

/// Group the relevant occurrences by case. The occurrence enumeration is the
/// encoding-specific part; everything downstream is shared.
fn gather(encoded: &EncodedLog, keys: &Keys, rule: &Rule) -> Vec<CaseOccs> {
    // Case nodes sit at the low node indexes (they are built first), so a
    // dense slot table beats a hash map here: this lookup runs once per
    // occurrence and dominates gathering cost on large logs.
    let mut index: Vec<u32> = Vec::new();
    let mut cases: Vec<CaseOccs> = Vec::new();

    for_each_occurrence(encoded, keys, trigger_activity(rule), |case, occ| {
        let i = slot(&mut index, &mut cases, case);
        cases[i].triggers.push(occ);
    });
    if rule.a == rule.b {
        for case in &mut cases {
            case.candidates = case.triggers.clone();
        }
    } else {
        for_each_occurrence(encoded, keys, candidate_activity(rule), |case, occ| {
            let i = slot(&mut index, &mut cases, case);
            cases[i].candidates.push(occ);
        });
    }
    for (label, excluded) in rule.excluded.iter().enumerate() {
        for_each_occurrence(encoded, keys, excluded, |case, occ| {
            let i = slot(&mut index, &mut cases, case);
            cases[i].excluded.push(ExcludedOcc { pos: occ.pos, ts: occ.ts, label: label as u32 });
        });
    }

    for case in &mut cases {
        case.triggers.sort_unstable_by_key(|o| o.pos);
        case.candidates.sort_unstable_by_key(|o| o.pos);
        case.excluded.sort_unstable_by_key(|o| o.pos);
    }
    cases
}

const UNSEEN: u32 = u32::MAX;

/// Index of `case` in `cases`, inserting an empty record on first sight.
fn slot(index: &mut Vec<u32>, cases: &mut Vec<CaseOccs>, case: NodeId) -> usize {
    let at = case.index();
    if at >= index.len() {
        index.resize(at + 1, UNSEEN);
    }
    if index[at] != UNSEEN {
        return index[at] as usize;
    }
    cases.push(CaseOccs::new(case));
    let i = cases.len() - 1;
    index[at] = i as u32;
    i
}

/// Enumerate `(case node, occurrence)` for one activity label, the way the
/// encoding at hand supports it.
fn for_each_occurrence(
    encoded: &EncodedLog,
    keys: &Keys,
    activity: &str,
    mut f: impl FnMut(NodeId, Occ),
) {
    let g = &encoded.graph;
    match encoded.kind {
        EncodingKind::Bm | EncodingKind::Ep => {
            for &node in g.find_nodes(EVENT_LABEL, ACTIVITY_KEY, &PropertyValue::str(activity)) {
                let to_case = g
                    .out_edges_labeled(node, encoded.vocab.event_to_case)
                    .next()
                    .expect("every event node links to its case");
                f(
                    g.edge_dst(to_case),
                    Occ {
                        pos: prop_int(g.node_prop_by_id(node, keys.position)),
                        ts: prop_int(g.node_prop_by_id(node, keys.timestamp)),
                    },
                );
            }
        }
        EncodingKind::Ua => {
            let Some(&node) = g
                .find_nodes(ACTIVITY_LABEL, NAME_KEY, &PropertyValue::str(activity))
                .first()
            else {
                return;
            };
            for edge in g.out_edges_labeled(node, encoded.vocab.event_to_case) {
                let (mut pos, mut ts) = (None, None);
                for (k, v) in g.edge_prop_entries(edge) {
                    if *k == keys.position {
                        pos = Some(v);
                    } else if *k == keys.timestamp {
                        ts = Some(v);
                    }
                }
                f(g.edge_dst(edge), Occ { pos: prop_int(pos), ts: prop_int(ts) });
            }
        }
    }
}

fn prop_int(value: Option<&PropertyValue>) -> i64 {
    value
        .and_then(PropertyValue::as_int)
        .expect("encoded position/timestamp properties are integers")
}

fn event_ref(case_id: &str, activity: &str, occ: Occ) -> EventRef {
    EventRef {
        case_id: case_id.to_string(),
        activity: activity.to_string(),
        position: occ.pos as u32,
        timestamp: occ.ts,
    }
}

fn eval_case(
    g: &Graph,
    id_key: KeyId,
    rule: &Rule,
    case: &CaseOccs,
) -> Result<Vec<Witness>, RuleError> {
    let w = rule.window;
    // (trigger, detail activity + occurrence); turned into witnesses at the
    // end so the case id is only looked up when something violated
    let mut raw: Vec<(Occ, Option<(&str, Occ)>)> = Vec::new();
    match rule.kind {
        RuleKind::Response => {
            for &t in &case.triggers {
                // Strictly-later distinct occurrences; positions are unique
                // within a case, so `>` is exactly "not this event, not
                // earlier".
                let from = case.candidates.partition_point(|c| c.pos <= t.pos);
                let mut satisfied = false;
                for c in &case.candidates[from..] {
                    if theta_satisfied(w.theta, c.ts - t.ts, w.delta_t)? {
                        satisfied = true;
                        break;
                    }
                }
                if !satisfied {
                    raw.push((t, case.candidates.get(from).map(|&c| (rule.b.as_str(), c))));
                }
            }
        }
        RuleKind::Precedes => {
            for &t in &case.triggers {
                // Not-later occurrences; the trigger itself qualifies when
                // the rule names the same activity on both sides.
                let upto = case.candidates.partition_point(|c| c.pos <= t.pos);
                let mut satisfied = false;
                for c in case.candidates[..upto].iter().rev() {
                    if theta_satisfied(w.theta, t.ts - c.ts, w.delta_t)? {
                        satisfied = true;
                        break;
                    }
                }
                if !satisfied {
                    raw.push((
                        t,
                        upto.checked_sub(1).map(|i| (rule.a.as_str(), case.candidates[i])),
                    ));
                }
            }
        }
        RuleKind::Exclude => {
            for &t in &case.triggers {
                // A pair (trigger, b) violates iff an excluded event lies
                // strictly between; the earliest excluded occurrence after
                // the trigger bounds all such pairs from below.
                let ci = case.excluded.partition_point(|c| c.pos <= t.pos);
                let Some(&first_excluded) = case.excluded.get(ci) else {
                    continue;
                };
                let from = case.candidates.partition_point(|b| b.pos <= first_excluded.pos);
                for b in &case.candidates[from..] {
                    if theta_satisfied(w.theta, b.ts - t.ts, w.delta_t)? {
                        raw.push((
                            t,
                            Some((
                                rule.excluded[first_excluded.label as usize].as_str(),
                                Occ { pos: first_excluded.pos, ts: first_excluded.ts },
                            )),
                        ));
                        break;
                    }
                }
            }
        }
    }

    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let case_id = g
        .node_prop_by_id(case.node, id_key)
        .and_then(PropertyValue::as_str)
        .expect("case nodes carry a string ID");
    let trigger_label = trigger_activity(rule);
    Ok(raw
        .into_iter()
        .map(|(t, detail)| Witness {
            trigger: event_ref(case_id, trigger_label, t),
            detail: detail.map(|(label, occ)| event_ref(case_id, label, occ)),
        })
        .collect())
}
