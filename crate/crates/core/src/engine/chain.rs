//! Chain-walking strategy for the baseline encoding.
//!
//! Trigger events come from the activity property index; everything else is
//! pure traversal. Each event node has at most one outgoing and one incoming
//! `Directly_follows` edge, so a trace is a doubly linked list: RESPONSE and
//! EXCLUDE walk it forward from the trigger, PRECEDES walks it backward. The
//! walk carries whatever state the rule needs (first partner seen, first
//! excluded event seen) and stops as soon as the verdict is known.

use rayon::prelude::*;

use crate::encoders::{EncodedLog, EncodingKind, ACTIVITY_KEY, EVENT_LABEL};
use crate::lpg::{Graph, NodeId, PropertyValue};
use crate::rules::{theta_satisfied, Rule, RuleError, RuleKind};

use super::{trigger_activity, EventRef, Keys, Witness};

pub(super) fn check_bm(
    encoded: &EncodedLog,
    rule: &Rule,
    parallel: bool,
) -> Result<Vec<Witness>, RuleError> {
    debug_assert_eq!(encoded.kind, EncodingKind::Bm);
    let g = &encoded.graph;
    let Some(keys) = Keys::resolve(g) else {
        return Ok(Vec::new()); // no events were ever encoded
    };
    let triggers =
        g.find_nodes(EVENT_LABEL, ACTIVITY_KEY, &PropertyValue::str(trigger_activity(rule)));

    let walk = Walk { g, keys: &keys, vocab: encoded.vocab, rule };
    if parallel {
        let maybe: Vec<Option<Witness>> = triggers
            .par_iter()
            .map(|&n| walk.eval_trigger(n))
            .collect::<Result<_, _>>()?;
        Ok(maybe.into_iter().flatten().collect())
    } else {
        let mut out = Vec::new();
        for &n in triggers {
            out.extend(walk.eval_trigger(n)?);
        }
        Ok(out)
    }
}

struct Walk<'g> {
    g: &'g Graph,
    keys: &'g Keys,
    vocab: crate::encoders::Vocabulary,
    rule: &'g Rule,
}

impl Walk<'_> {
    fn eval_trigger(&self, trigger: NodeId) -> Result<Option<Witness>, RuleError> {
        match self.rule.kind {
            RuleKind::Response => self.response(trigger),
            RuleKind::Precedes => self.precedes(trigger),
            RuleKind::Exclude => self.exclude(trigger),
        }
    }

    fn response(&self, trigger: NodeId) -> Result<Option<Witness>, RuleError> {
        let t_ts = self.ts(trigger);
        let mut first_b: Option<NodeId> = None;
        let mut cur = self.next(trigger);
        while let Some(node) = cur {
            if self.activity(node) == self.rule.b {
                if theta_satisfied(self.theta(), self.ts(node) - t_ts, self.delta())? {
                    return Ok(None);
                }
                first_b.get_or_insert(node);
            }
            cur = self.next(node);
        }
        Ok(Some(self.witness(trigger, first_b)))
    }

    fn precedes(&self, trigger: NodeId) -> Result<Option<Witness>, RuleError> {
        let t_ts = self.ts(trigger);
        let mut nearest_a: Option<NodeId> = None;
        // With the same activity on both sides the trigger is its own
        // earliest candidate at zero elapsed time.
        if self.rule.a == self.rule.b {
            if theta_satisfied(self.theta(), 0, self.delta())? {
                return Ok(None);
            }
            nearest_a = Some(trigger);
        }
        let mut cur = self.prev(trigger);
        while let Some(node) = cur {
            if self.activity(node) == self.rule.a {
                if theta_satisfied(self.theta(), t_ts - self.ts(node), self.delta())? {
                    return Ok(None);
                }
                nearest_a.get_or_insert(node);
            }
            cur = self.prev(node);
        }
        Ok(Some(self.witness(trigger, nearest_a)))
    }

    fn exclude(&self, trigger: NodeId) -> Result<Option<Witness>, RuleError> {
        let t_ts = self.ts(trigger);
        let mut first_excluded: Option<NodeId> = None;
        let mut cur = self.next(trigger);
        while let Some(node) = cur {
            let activity = self.activity(node);
            // Check the partner before recording the node as excluded:
            // "between" is strict, so an event cannot intervene in its own
            // pair.
            if first_excluded.is_some()
                && activity == self.rule.b
                && theta_satisfied(self.theta(), self.ts(node) - t_ts, self.delta())?
            {
                return Ok(Some(self.witness(trigger, first_excluded)));
            }
            if first_excluded.is_none() && self.rule.excluded.iter().any(|c| c == activity) {
                first_excluded = Some(node);
            }
            cur = self.next(node);
        }
        Ok(None)
    }

    fn next(&self, node: NodeId) -> Option<NodeId> {
        self.g
            .out_edges_labeled(node, self.vocab.directly_follows)
            .next()
            .map(|e| self.g.edge_dst(e))
    }

    fn prev(&self, node: NodeId) -> Option<NodeId> {
        self.g
            .in_edges_labeled(node, self.vocab.directly_follows)
            .next()
            .map(|e| self.g.edge_src(e))
    }

    fn activity(&self, node: NodeId) -> &str {
        self.g
            .node_prop_by_id(node, self.keys.activity)
            .and_then(PropertyValue::as_str)
            .expect("event nodes carry an activity")
    }

    fn ts(&self, node: NodeId) -> i64 {
        self.g
            .node_prop_by_id(node, self.keys.timestamp)
            .and_then(PropertyValue::as_int)
            .expect("event nodes carry a timestamp")
    }

    fn theta(&self) -> crate::rules::Theta {
        self.rule.window.theta
    }

    fn delta(&self) -> crate::rules::TimeDelta {
        self.rule.window.delta_t
    }

    fn case_id(&self, event: NodeId) -> &str {
        let to_case = self
            .g
            .out_edges_labeled(event, self.vocab.event_to_case)
            .next()
            .expect("every event node links to its case");
        self.g
            .node_prop_by_id(self.g.edge_dst(to_case), self.keys.id)
            .and_then(PropertyValue::as_str)
            .expect("case nodes carry a string ID")
    }

    fn event_ref(&self, case_id: &str, node: NodeId) -> EventRef {
        EventRef {
            case_id: case_id.to_string(),
            activity: self.activity(node).to_string(),
            position: self
                .g
                .node_prop_by_id(node, self.keys.position)
                .and_then(PropertyValue::as_int)
                .expect("event nodes carry a position") as u32,
            timestamp: self.ts(node),
        }
    }

    fn witness(&self, trigger: NodeId, detail: Option<NodeId>) -> Witness {
        let case_id = self.case_id(trigger);
        Witness {
            trigger: self.event_ref(case_id, trigger),
            detail: detail.map(|n| self.event_ref(case_id, n)),
        }
    }
}
