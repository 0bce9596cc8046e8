//! Three interchangeable graph encodings of an event log.
//!
//! All three share the `Case` node per trace (its `ID` property holds the
//! case id) and an `Event_to_case` edge per event; they differ in where the
//! event data lives and which structural edges exist:
//!
//! * **BM** — one `Event` node per event carrying `activity`, `timestamp`,
//!   `position` (and `resource`/`lifecycle` when present). `Event_to_case`
//!   edges point event → case, and consecutive events of a trace are chained
//!   with `Directly_follows` edges. Sizes: `E + C` nodes, `2E − C` edges.
//! * **EP** — BM without the `Directly_follows` chain; the `position`
//!   property alone carries the ordering. Sizes: `E + C` nodes, `E` edges.
//! * **UA** — one `Activity` node per distinct activity label (its `name`
//!   property holds the label) and *no* per-event nodes: each event becomes
//!   an `Event_to_case` edge activity → case carrying the event's properties.
//!   Sizes: `C + A` nodes, `E` edges.
//!
//! Construction runs in two passes — all nodes first, then all edges — and
//! freezes the graph before returning, so query code always sees a complete,
//! immutable structure. [`expected_sizes`] gives the closed-form node/edge
//! counts up front and [`LoadingReport`] records that the built graph matches
//! them along with phase timings.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::event_log::EventLog;
use crate::lpg::{average_degree, Graph, GraphStats, LabelId, NodeId, PropertyValue};

pub const CASE_LABEL: &str = "Case";
pub const EVENT_LABEL: &str = "Event";
pub const ACTIVITY_LABEL: &str = "Activity";
pub const EVENT_TO_CASE: &str = "Event_to_case";
pub const DIRECTLY_FOLLOWS: &str = "Directly_follows";

pub const ID_KEY: &str = "ID";
pub const ACTIVITY_KEY: &str = "activity";
pub const NAME_KEY: &str = "name";
pub const TIMESTAMP_KEY: &str = "timestamp";
pub const POSITION_KEY: &str = "position";
pub const RESOURCE_KEY: &str = "resource";
pub const LIFECYCLE_KEY: &str = "lifecycle";

/// Which of the three encodings to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    /// Event nodes plus a directly-follows chain per case.
    Bm,
    /// Event nodes ordered by an explicit position property; no chain edges.
    Ep,
    /// One node per distinct activity; events live on activity→case edges.
    Ua,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 3] = [EncodingKind::Bm, EncodingKind::Ep, EncodingKind::Ua];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Bm => "bm",
            EncodingKind::Ep => "ep",
            EncodingKind::Ua => "ua",
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown encoding {0:?}; expected bm, ep or ua")]
pub struct ParseEncodingError(String);

impl FromStr for EncodingKind {
    type Err = ParseEncodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bm" => Ok(EncodingKind::Bm),
            "ep" => Ok(EncodingKind::Ep),
            "ua" => Ok(EncodingKind::Ua),
            _ => Err(ParseEncodingError(s.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    /// Fewer events than non-empty cases would make the `2E − C` edge count
    /// negative; every case must contribute at least one event.
    #[error("{events} events cannot cover {cases} cases; each case needs at least one event")]
    MoreCasesThanEvents { cases: usize, events: usize },
}

/// Closed-form node/edge counts for an encoding of a log with the given
/// shape. Building the graph must reproduce these numbers exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeForecast {
    pub num_nodes: usize,
    pub num_edges: usize,
}

impl SizeForecast {
    pub fn avg_degree(self) -> f64 {
        average_degree(self.num_nodes, self.num_edges)
    }

    pub fn stats(self) -> GraphStats {
        GraphStats {
            num_nodes: self.num_nodes,
            num_edges: self.num_edges,
            avg_degree: self.avg_degree(),
        }
    }
}

/// Node/edge counts an encoding will produce for `cases` traces, `events`
/// events and `activities` distinct activity labels.
pub fn expected_sizes(
    cases: usize,
    events: usize,
    activities: usize,
    kind: EncodingKind,
) -> Result<SizeForecast, EncodeError> {
    if events < cases && cases > 0 {
        return Err(EncodeError::MoreCasesThanEvents { cases, events });
    }
    let forecast = match kind {
        EncodingKind::Bm => SizeForecast {
            num_nodes: events + cases,
            num_edges: 2 * events - cases,
        },
        EncodingKind::Ep => SizeForecast { num_nodes: events + cases, num_edges: events },
        EncodingKind::Ua => SizeForecast { num_nodes: cases + activities, num_edges: events },
    };
    Ok(forecast)
}

/// Interned ids for the edge labels the query engine walks, resolved once
/// per graph so adjacency filtering never re-hashes label strings.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Vocabulary {
    pub event_to_case: LabelId,
    pub directly_follows: LabelId,
}

impl Vocabulary {
    fn intern(graph: &mut Graph) -> Self {
        Vocabulary {
            event_to_case: graph.intern_label(EVENT_TO_CASE),
            directly_follows: graph.intern_label(DIRECTLY_FOLLOWS),
        }
    }
}

/// A frozen graph produced by [`encode`], tagged with the encoding that
/// built it.
pub struct EncodedLog {
    pub kind: EncodingKind,
    pub graph: Graph,
    pub(crate) vocab: Vocabulary,
}

impl EncodedLog {
    pub fn stats(&self) -> GraphStats {
        self.graph.stats()
    }

    /// Node and edge labels this encoding actually writes.
    pub fn labels_in_use(&self) -> Vec<&'static str> {
        match self.kind {
            EncodingKind::Bm => {
                vec![CASE_LABEL, EVENT_LABEL, EVENT_TO_CASE, DIRECTLY_FOLLOWS]
            }
            EncodingKind::Ep => vec![CASE_LABEL, EVENT_LABEL, EVENT_TO_CASE],
            EncodingKind::Ua => vec![CASE_LABEL, ACTIVITY_LABEL, EVENT_TO_CASE],
        }
    }
}

/// Timings and size verification for one [`encode`] run. Offsets are
/// measured from the start of construction, so the two-pass discipline is
/// checkable: `edge_pass_started >= node_pass_completed`.
#[derive(Debug, Clone)]
pub struct LoadingReport {
    pub kind: EncodingKind,
    pub cases: usize,
    pub events: usize,
    pub activities: usize,
    pub forecast: SizeForecast,
    pub actual: SizeForecast,
    pub node_pass_completed: Duration,
    pub edge_pass_started: Duration,
    pub total: Duration,
}

impl LoadingReport {
    /// `true` when the built graph matches the closed-form size forecast.
    pub fn sizes_match(&self) -> bool {
        self.forecast == self.actual
    }

    pub fn csv_header() -> &'static str {
        "encoding,cases,events,activities,nodes,edges,avg_degree,load_secs"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.4},{:.6}",
            self.kind,
            self.cases,
            self.events,
            self.activities,
            self.actual.num_nodes,
            self.actual.num_edges,
            self.actual.avg_degree(),
            self.total.as_secs_f64()
        )
    }
}

impl Serialize for LoadingReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LoadingReport", 10)?;
        s.serialize_field("encoding", self.kind.name())?;
        s.serialize_field("cases", &self.cases)?;
        s.serialize_field("events", &self.events)?;
        s.serialize_field("activities", &self.activities)?;
        s.serialize_field("nodes", &self.actual.num_nodes)?;
        s.serialize_field("edges", &self.actual.num_edges)?;
        s.serialize_field("avg_degree", &self.actual.avg_degree())?;
        s.serialize_field("node_pass_secs", &self.node_pass_completed.as_secs_f64())?;
        s.serialize_field("edge_pass_secs", &(self.total - self.edge_pass_started).as_secs_f64())?;
        s.serialize_field("load_secs", &self.total.as_secs_f64())?;
        s.end()
    }
}

/// Build the chosen encoding of `log`. The returned graph is frozen.
pub fn encode(log: &EventLog, kind: EncodingKind) -> Result<EncodedLog, EncodeError> {
    encode_with_report(log, kind).map(|(encoded, _)| encoded)
}

/// [`encode`], also returning phase timings and the size verification.
pub fn encode_with_report(
    log: &EventLog,
    kind: EncodingKind,
) -> Result<(EncodedLog, LoadingReport), EncodeError> {
    let forecast = expected_sizes(log.num_cases(), log.num_events(), log.num_activities(), kind)?;
    let start = Instant::now();

    let mut graph = Graph::new();
    let vocab = Vocabulary::intern(&mut graph);

    // Pass 1: nodes. Traces come out of the log in sorted case-id order and
    // activities sorted by label, so node ids are deterministic per log.
    let mut case_nodes: Vec<NodeId> = Vec::with_capacity(log.num_cases());
    for trace in log.traces() {
        let node = graph
            .add_node(&[CASE_LABEL], [(ID_KEY, PropertyValue::str(&trace.case_id))])
            .expect("unfrozen graph with a non-empty label set");
        case_nodes.push(node);
    }

    // In the event-node encodings the per-case event nodes are contiguous,
    // in trace order; UA instead gets one node per distinct activity.
    let mut event_nodes: Vec<NodeId> = Vec::new();
    let mut activity_nodes: Vec<NodeId> = Vec::new();
    match kind {
        EncodingKind::Bm | EncodingKind::Ep => {
            event_nodes.reserve(log.num_events());
            for trace in log.traces() {
                for event in &trace.events {
                    let mut props: Vec<(&str, PropertyValue)> = vec![
                        (ACTIVITY_KEY, PropertyValue::str(&event.activity)),
                        (TIMESTAMP_KEY, PropertyValue::int(event.timestamp)),
                        (POSITION_KEY, PropertyValue::int(i64::from(event.position))),
                    ];
                    if let Some(resource) = &event.resource {
                        props.push((RESOURCE_KEY, PropertyValue::str(resource)));
                    }
                    if let Some(lifecycle) = &event.lifecycle {
                        props.push((LIFECYCLE_KEY, PropertyValue::str(lifecycle)));
                    }
                    for (key, value) in &event.extra {
                        props.push((key, PropertyValue::str(value)));
                    }
                    let node = graph
                        .add_node(&[EVENT_LABEL], props)
                        .expect("unfrozen graph with a non-empty label set");
                    event_nodes.push(node);
                }
            }
        }
        EncodingKind::Ua => {
            activity_nodes.reserve(log.num_activities());
            for activity in log.activities() {
                let node = graph
                    .add_node(&[ACTIVITY_LABEL], [(NAME_KEY, PropertyValue::str(activity))])
                    .expect("unfrozen graph with a non-empty label set");
                activity_nodes.push(node);
            }
        }
    }
    let node_pass_completed = start.elapsed();

    // Pass 2: edges.
    let edge_pass_started = start.elapsed();
    match kind {
        EncodingKind::Bm | EncodingKind::Ep => {
            let mut next_event = 0usize;
            for (case_idx, trace) in log.traces().enumerate() {
                let case_node = case_nodes[case_idx];
                let first = next_event;
                for _ in &trace.events {
                    let event_node = event_nodes[next_event];
                    graph
                        .add_edge(event_node, case_node, &[EVENT_TO_CASE], [])
                        .expect("endpoints were created in pass 1");
                    next_event += 1;
                }
                if kind == EncodingKind::Bm {
                    for pair in first..next_event.saturating_sub(1) {
                        graph
                            .add_edge(
                                event_nodes[pair],
                                event_nodes[pair + 1],
                                &[DIRECTLY_FOLLOWS],
                                [],
                            )
                            .expect("endpoints were created in pass 1");
                    }
                }
            }
        }
        EncodingKind::Ua => {
            // log.activities() is sorted, matching activity_nodes order.
            let index_of: std::collections::HashMap<&str, usize> = log
                .activities()
                .enumerate()
                .map(|(i, a)| (a, i))
                .collect();
            for (case_idx, trace) in log.traces().enumerate() {
                let case_node = case_nodes[case_idx];
                for event in &trace.events {
                    let activity_node = activity_nodes[index_of[event.activity.as_str()]];
                    let mut props: Vec<(&str, PropertyValue)> = vec![
                        (ACTIVITY_KEY, PropertyValue::str(&event.activity)),
                        (TIMESTAMP_KEY, PropertyValue::int(event.timestamp)),
                        (POSITION_KEY, PropertyValue::int(i64::from(event.position))),
                    ];
                    if let Some(resource) = &event.resource {
                        props.push((RESOURCE_KEY, PropertyValue::str(resource)));
                    }
                    if let Some(lifecycle) = &event.lifecycle {
                        props.push((LIFECYCLE_KEY, PropertyValue::str(lifecycle)));
                    }
                    for (key, value) in &event.extra {
                        props.push((key, PropertyValue::str(value)));
                    }
                    graph
                        .add_edge(activity_node, case_node, &[EVENT_TO_CASE], props)
                        .expect("endpoints were created in pass 1");
                }
            }
        }
    }
    graph.freeze();
    let total = start.elapsed();

    let actual = SizeForecast {
        num_nodes: graph.num_nodes(),
        num_edges: graph.num_edges(),
    };
    debug_assert_eq!(forecast, actual, "closed-form sizes must match the built graph");

    let report = LoadingReport {
        kind,
        cases: log.num_cases(),
        events: log.num_events(),
        activities: log.num_activities(),
        forecast,
        actual,
        node_pass_completed,
        edge_pass_started,
        total,
    };
    Ok((EncodedLog { kind, graph, vocab }, report))
}

/// Build the encoding and return only the verification/timing report.
pub fn loading_report(log: &EventLog, kind: EncodingKind) -> Result<LoadingReport, EncodeError> {
    encode_with_report(log, kind).map(|(_, report)| report)
}
