//! An in-memory labeled property multigraph.
//!
//! Nodes carry a non-empty set of labels and a key→value property map;
//! edges are directed, may occur in parallel between the same endpoints and
//! carry labels and properties of their own. The store keeps two query
//! indexes — label → nodes and (label, key, value) → nodes for exact-match
//! lookups — plus per-node incoming and outgoing adjacency. Range predicates
//! are not indexed; callers retrieve candidates by exact match and compare
//! properties themselves.
//!
//! Graphs are append-only while being built and must be [frozen](Graph::freeze)
//! before querying; a frozen graph rejects further mutation.

use std::collections::HashMap;
use std::fmt;
use std::io;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

/// Identifies a node; assigned densely from 0 in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifies an edge; assigned densely from 0 in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Interned label identifier, scoped to one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelId(u32);

/// Interned property-key identifier, scoped to one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyId(u32);

/// A property value. Equality across different tags is `false` for indexing
/// purposes, but *ordering* across tags is a type error: use [`try_cmp`]
/// (or the typed accessors) rather than comparing raw values blind.
///
/// [`try_cmp`]: PropertyValue::try_cmp
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropertyValue {
    Str(String),
    Int(i64),
    Null,
}

impl PropertyValue {
    pub fn str(v: impl Into<String>) -> Self {
        PropertyValue::Str(v.into())
    }

    pub fn int(v: i64) -> Self {
        PropertyValue::Int(v)
    }

    fn tag(&self) -> &'static str {
        match self {
            PropertyValue::Str(_) => "string",
            PropertyValue::Int(_) => "integer",
            PropertyValue::Null => "null",
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            PropertyValue::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            PropertyValue::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// Ordered comparison; values of different tags do not compare.
    pub fn try_cmp(&self, other: &PropertyValue) -> Result<std::cmp::Ordering, GraphError> {
        match (self, other) {
            (PropertyValue::Str(a), PropertyValue::Str(b)) => Ok(a.cmp(b)),
            (PropertyValue::Int(a), PropertyValue::Int(b)) => Ok(a.cmp(b)),
            (PropertyValue::Null, PropertyValue::Null) => Ok(std::cmp::Ordering::Equal),
            _ => Err(GraphError::TypeMismatch { left: self.tag(), right: other.tag() }),
        }
    }
}

impl From<&str> for PropertyValue {
    fn from(v: &str) -> Self {
        PropertyValue::Str(v.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(v: String) -> Self {
        PropertyValue::Str(v)
    }
}

impl From<i64> for PropertyValue {
    fn from(v: i64) -> Self {
        PropertyValue::Int(v)
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Str(s) => write!(f, "{s:?}"),
            PropertyValue::Int(i) => write!(f, "{i}"),
            PropertyValue::Null => f.write_str("null"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node labels must not be empty")]
    EmptyNodeLabels,
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("graph is frozen; mutation is no longer allowed")]
    Frozen,
    #[error("cannot compare a {left} value with a {right} value")]
    TypeMismatch { left: &'static str, right: &'static str },
}

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn get_or_intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }
}

struct NodeData {
    labels: SmallVec<[LabelId; 2]>,
    props: SmallVec<[(KeyId, PropertyValue); 4]>,
    out: SmallVec<[EdgeId; 2]>,
    inc: SmallVec<[EdgeId; 2]>,
}

struct EdgeData {
    src: NodeId,
    dst: NodeId,
    labels: SmallVec<[LabelId; 1]>,
    /// Range into [`Graph::edge_prop_pool`].
    props_start: u32,
    props_len: u32,
}

/// Structural counts of a graph. The average degree is edges per node, so an
/// empty graph has degree zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphStats {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub avg_degree: f64,
}

/// Edges per node; the density figure reported alongside structural counts.
pub fn average_degree(num_nodes: usize, num_edges: usize) -> f64 {
    if num_nodes == 0 {
        0.0
    } else {
        num_edges as f64 / num_nodes as f64
    }
}

/// The multigraph store. See the [module docs](self) for the data model.
#[derive(Default)]
pub struct Graph {
    nodes: Vec<NodeData>,
    edges: Vec<EdgeData>,
    /// All edge properties, back to back in insertion order. One arena keeps
    /// per-edge reads off the allocator's free lists: hot scans stay fast no
    /// matter how fragmented the heap was while the graph was built.
    edge_prop_pool: Vec<(KeyId, PropertyValue)>,
    labels: Interner,
    keys: Interner,
    label_index: HashMap<LabelId, Vec<NodeId>>,
    prop_index: HashMap<(LabelId, KeyId, PropertyValue), Vec<NodeId>>,
    frozen: bool,
}

const NO_NODES: &[NodeId] = &[];

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// End the construction phase. Queries are valid before and after, but
    /// mutation is rejected from now on.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    /// Add a node with at least one label. Duplicate labels and duplicate
    /// property keys collapse (for keys, the last value wins). Both indexes
    /// are updated.
    pub fn add_node<'a>(
        &mut self,
        labels: &[&str],
        props: impl IntoIterator<Item = (&'a str, PropertyValue)>,
    ) -> Result<NodeId, GraphError> {
        if self.frozen {
            return Err(GraphError::Frozen);
        }
        if labels.is_empty() {
            return Err(GraphError::EmptyNodeLabels);
        }
        let id = NodeId(self.nodes.len() as u32);

        let mut label_ids: SmallVec<[LabelId; 2]> =
            labels.iter().map(|l| LabelId(self.labels.get_or_intern(l))).collect();
        label_ids.sort_unstable_by_key(|l| l.0);
        label_ids.dedup();

        let mut prop_list: SmallVec<[(KeyId, PropertyValue); 4]> = SmallVec::new();
        for (key, value) in props {
            let key = KeyId(self.keys.get_or_intern(key));
            match prop_list.iter_mut().find(|(k, _)| *k == key) {
                Some(slot) => slot.1 = value,
                None => prop_list.push((key, value)),
            }
        }

        for &label in &label_ids {
            self.label_index.entry(label).or_default().push(id);
            for (key, value) in &prop_list {
                self.prop_index
                    .entry((label, *key, value.clone()))
                    .or_default()
                    .push(id);
            }
        }

        self.nodes.push(NodeData {
            labels: label_ids,
            props: prop_list,
            out: SmallVec::new(),
            inc: SmallVec::new(),
        });
        Ok(id)
    }

    /// Add a directed edge. Parallel edges between the same endpoints are
    /// allowed and kept distinct.
    pub fn add_edge<'a>(
        &mut self,
        src: NodeId,
        dst: NodeId,
        labels: &[&str],
        props: impl IntoIterator<Item = (&'a str, PropertyValue)>,
    ) -> Result<EdgeId, GraphError> {
        if self.frozen {
            return Err(GraphError::Frozen);
        }
        for endpoint in [src, dst] {
            if endpoint.index() >= self.nodes.len() {
                return Err(GraphError::UnknownNode(endpoint));
            }
        }
        let id = EdgeId(self.edges.len() as u32);

        let mut label_ids: SmallVec<[LabelId; 1]> =
            labels.iter().map(|l| LabelId(self.labels.get_or_intern(l))).collect();
        label_ids.sort_unstable_by_key(|l| l.0);
        label_ids.dedup();

        let start = self.edge_prop_pool.len();
        for (key, value) in props {
            let key = KeyId(self.keys.get_or_intern(key));
            match self.edge_prop_pool[start..].iter_mut().find(|(k, _)| *k == key) {
                Some(slot) => slot.1 = value,
                None => self.edge_prop_pool.push((key, value)),
            }
        }

        self.nodes[src.index()].out.push(id);
        self.nodes[dst.index()].inc.push(id);
        self.edges.push(EdgeData {
            src,
            dst,
            labels: label_ids,
            props_start: start as u32,
            props_len: (self.edge_prop_pool.len() - start) as u32,
        });
        Ok(id)
    }

    pub fn label_id(&self, label: &str) -> Option<LabelId> {
        self.labels.get(label).map(LabelId)
    }

    pub fn key_id(&self, key: &str) -> Option<KeyId> {
        self.keys.get(key).map(KeyId)
    }

    /// Intern a label up front so later id-based lookups can assume it exists.
    pub fn intern_label(&mut self, label: &str) -> LabelId {
        LabelId(self.labels.get_or_intern(label))
    }

    /// Intern a property key up front.
    pub fn intern_key(&mut self, key: &str) -> KeyId {
        KeyId(self.keys.get_or_intern(key))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn node_labels(&self, node: NodeId) -> impl Iterator<Item = &str> {
        self.nodes[node.index()].labels.iter().map(|l| self.labels.name(l.0))
    }

    pub fn node_has_label(&self, node: NodeId, label: LabelId) -> bool {
        self.nodes[node.index()].labels.contains(&label)
    }

    pub fn node_props(&self, node: NodeId) -> impl Iterator<Item = (&str, &PropertyValue)> {
        self.nodes[node.index()].props.iter().map(|(k, v)| (self.keys.name(k.0), v))
    }

    pub fn node_prop(&self, node: NodeId, key: &str) -> Option<&PropertyValue> {
        let key = self.key_id(key)?;
        self.node_prop_by_id(node, key)
    }

    pub fn node_prop_by_id(&self, node: NodeId, key: KeyId) -> Option<&PropertyValue> {
        self.nodes[node.index()].props.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn edge_endpoints(&self, edge: EdgeId) -> (NodeId, NodeId) {
        let e = &self.edges[edge.index()];
        (e.src, e.dst)
    }

    pub fn edge_src(&self, edge: EdgeId) -> NodeId {
        self.edges[edge.index()].src
    }

    pub fn edge_dst(&self, edge: EdgeId) -> NodeId {
        self.edges[edge.index()].dst
    }

    pub fn edge_labels(&self, edge: EdgeId) -> impl Iterator<Item = &str> {
        self.edges[edge.index()].labels.iter().map(|l| self.labels.name(l.0))
    }

    pub fn edge_has_label(&self, edge: EdgeId, label: LabelId) -> bool {
        self.edges[edge.index()].labels.contains(&label)
    }

    pub fn edge_props(&self, edge: EdgeId) -> impl Iterator<Item = (&str, &PropertyValue)> {
        self.edge_prop_entries(edge).iter().map(|(k, v)| (self.keys.name(k.0), v))
    }

    pub fn edge_prop(&self, edge: EdgeId, key: &str) -> Option<&PropertyValue> {
        let key = self.key_id(key)?;
        self.edge_prop_by_id(edge, key)
    }

    pub fn edge_prop_by_id(&self, edge: EdgeId, key: KeyId) -> Option<&PropertyValue> {
        self.edge_prop_entries(edge).iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    /// Raw `(key, value)` entries of one edge, for callers that pull several
    /// properties and don't want to rescan per key.
    pub(crate) fn edge_prop_entries(&self, edge: EdgeId) -> &[(KeyId, PropertyValue)] {
        let e = &self.edges[edge.index()];
        &self.edge_prop_pool[e.props_start as usize..(e.props_start + e.props_len) as usize]
    }

    /// Outgoing edges in insertion order.
    pub fn out_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.nodes[node.index()].out
    }

    /// Incoming edges in insertion order.
    pub fn in_edges(&self, node: NodeId) -> &[EdgeId] {
        &self.nodes[node.index()].inc
    }

    /// Outgoing edges carrying the given label.
    pub fn out_edges_labeled(
        &self,
        node: NodeId,
        label: LabelId,
    ) -> impl Iterator<Item = EdgeId> + '_ {
        self.out_edges(node).iter().copied().filter(move |&e| self.edge_has_label(e, label))
    }

    /// Incoming edges carrying the given label.
    pub fn in_edges_labeled(
        &self,
        node: NodeId,
        label: LabelId,
    ) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_edges(node).iter().copied().filter(move |&e| self.edge_has_label(e, label))
    }

    /// Incident edge count, incoming plus outgoing; a self-loop counts twice.
    pub fn degree(&self, node: NodeId) -> usize {
        let n = &self.nodes[node.index()];
        n.out.len() + n.inc.len()
    }

    /// All nodes carrying the label, in id order.
    pub fn nodes_with_label(&self, label: &str) -> &[NodeId] {
        self.label_id(label)
            .and_then(|l| self.label_index.get(&l))
            .map_or(NO_NODES, Vec::as_slice)
    }

    /// Exact-match property lookup: nodes carrying `label` with `key = value`,
    /// in id order. Unknown labels, keys or values yield an empty slice.
    pub fn find_nodes(&self, label: &str, key: &str, value: &PropertyValue) -> &[NodeId] {
        let (Some(label), Some(key)) = (self.label_id(label), self.key_id(key)) else {
            return NO_NODES;
        };
        self.prop_index
            .get(&(label, key, value.clone()))
            .map_or(NO_NODES, Vec::as_slice)
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            num_nodes: self.num_nodes(),
            num_edges: self.num_edges(),
            avg_degree: average_degree(self.num_nodes(), self.num_edges()),
        }
    }

    /// Line-oriented text dump, one node or edge per line in id order with
    /// sorted properties. Deterministic, intended for golden-file tests and
    /// debugging.
    pub fn dump<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        let fmt_props = |props: &mut String, pairs: Vec<(&str, &PropertyValue)>| {
            let mut pairs = pairs;
            pairs.sort_by_key(|(k, _)| *k);
            for (k, v) in pairs {
                props.push_str(&format!(" {k}={v}"));
            }
        };
        for node in self.node_ids() {
            let labels: Vec<&str> = self.node_labels(node).collect();
            let mut props = String::new();
            fmt_props(&mut props, self.node_props(node).collect());
            writeln!(w, "node {node} [{}]{props}", labels.join(","))?;
        }
        for edge in self.edge_ids() {
            let labels: Vec<&str> = self.edge_labels(edge).collect();
            let (src, dst) = self.edge_endpoints(edge);
            let mut props = String::new();
            fmt_props(&mut props, self.edge_props(edge).collect());
            writeln!(w, "edge {edge} {src}->{dst} [{}]{props}", labels.join(","))?;
        }
        Ok(())
    }

    /// [`dump`](Graph::dump) into a `String`.
    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.dump(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump output is UTF-8")
    }
}

/// Structural counts and density of a graph.
pub fn graph_stats(graph: &Graph) -> GraphStats {
    graph.stats()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_round_trip_through_indexes() {
        let mut g = Graph::new();
        let a = g.add_node(&["Event"], [("activity", "A".into())]).unwrap();
        let b = g.add_node(&["Event"], [("activity", "B".into())]).unwrap();
        let c = g.add_node(&["Case"], [("ID", "1".into())]).unwrap();
        g.freeze();

        assert_eq!(g.nodes_with_label("Event"), &[a, b]);
        assert_eq!(g.nodes_with_label("Case"), &[c]);
        assert_eq!(g.find_nodes("Event", "activity", &"A".into()), &[a]);
        assert_eq!(g.find_nodes("Event", "activity", &"Z".into()), NO_NODES);
        assert_eq!(g.find_nodes("Nope", "activity", &"A".into()), NO_NODES);
        // Same value under a different label does not leak across labels.
        assert_eq!(g.find_nodes("Case", "activity", &"A".into()), NO_NODES);
    }

    #[test]
    fn duplicate_nodes_stay_distinct() {
        let mut g = Graph::new();
        let first = g.add_node(&["Event"], [("activity", "A".into())]).unwrap();
        let second = g.add_node(&["Event"], [("activity", "A".into())]).unwrap();
        assert_ne!(first, second);
        assert_eq!(g.find_nodes("Event", "activity", &"A".into()).len(), 2);
    }

    #[test]
    fn empty_labels_are_rejected() {
        let mut g = Graph::new();
        assert_eq!(g.add_node(&[], []), Err(GraphError::EmptyNodeLabels));
    }

    #[test]
    fn edges_update_adjacency_both_ways() {
        let mut g = Graph::new();
        let a = g.add_node(&["N"], []).unwrap();
        let b = g.add_node(&["N"], []).unwrap();
        let e = g.add_edge(a, b, &["related_to"], []).unwrap();
        assert_eq!(g.out_edges(a), &[e]);
        assert_eq!(g.in_edges(b), &[e]);
        assert!(g.out_edges(b).is_empty());
        assert_eq!(g.edge_endpoints(e), (a, b));
        assert_eq!(g.degree(a), 1);
        assert_eq!(g.degree(b), 1);
    }

    #[test]
    fn parallel_edges_are_kept_distinct() {
        let mut g = Graph::new();
        let a = g.add_node(&["N"], []).unwrap();
        let b = g.add_node(&["N"], []).unwrap();
        let e1 = g.add_edge(a, b, &["L"], [("position", 1.into())]).unwrap();
        let e2 = g.add_edge(a, b, &["L"], [("position", 2.into())]).unwrap();
        assert_ne!(e1, e2);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.out_edges(a).len(), 2);
        assert_eq!(g.edge_prop(e1, "position"), Some(&PropertyValue::Int(1)));
        assert_eq!(g.edge_prop(e2, "position"), Some(&PropertyValue::Int(2)));
    }

    #[test]
    fn dangling_edge_endpoints_are_rejected() {
        let mut g = Graph::new();
        let a = g.add_node(&["N"], []).unwrap();
        let ghost = {
            let mut other = Graph::new();
            other.add_node(&["N"], []).unwrap();
            other.add_node(&["N"], []).unwrap()
        };
        assert_eq!(g.add_edge(a, ghost, &["L"], []), Err(GraphError::UnknownNode(ghost)));
    }

    #[test]
    fn frozen_graphs_reject_mutation() {
        let mut g = Graph::new();
        let a = g.add_node(&["N"], []).unwrap();
        g.freeze();
        assert_eq!(g.add_node(&["N"], []), Err(GraphError::Frozen));
        assert_eq!(g.add_edge(a, a, &["L"], []), Err(GraphError::Frozen));
        // Queries still work.
        assert_eq!(g.nodes_with_label("N"), &[a]);
    }

    #[test]
    fn labeled_adjacency_filters() {
        let mut g = Graph::new();
        let a = g.add_node(&["N"], []).unwrap();
        let b = g.add_node(&["N"], []).unwrap();
        let follows = g.add_edge(a, b, &["follows"], []).unwrap();
        let other = g.add_edge(a, b, &["other"], []).unwrap();
        g.freeze();
        let follows_id = g.label_id("follows").unwrap();
        let got: Vec<EdgeId> = g.out_edges_labeled(a, follows_id).collect();
        assert_eq!(got, vec![follows]);
        let got: Vec<EdgeId> = g.in_edges_labeled(b, follows_id).collect();
        assert_eq!(got, vec![follows]);
        assert_ne!(follows, other);
    }

    #[test]
    fn cross_tag_comparisons_are_errors() {
        let s = PropertyValue::str("10");
        let i = PropertyValue::int(10);
        assert!(matches!(s.try_cmp(&i), Err(GraphError::TypeMismatch { .. })));
        assert_eq!(i.try_cmp(&PropertyValue::int(3)).unwrap(), std::cmp::Ordering::Greater);
        assert_eq!(
            PropertyValue::Null.try_cmp(&PropertyValue::Null).unwrap(),
            std::cmp::Ordering::Equal
        );
        // Exact-match equality across tags is simply false, never a panic.
        assert_ne!(s, i);
    }

    #[test]
    fn stats_count_everything() {
        let mut g = Graph::new();
        assert_eq!(g.stats(), GraphStats { num_nodes: 0, num_edges: 0, avg_degree: 0.0 });
        let a = g.add_node(&["N"], []).unwrap();
        let b = g.add_node(&["N"], []).unwrap();
        g.add_edge(a, b, &["L"], []).unwrap();
        g.add_edge(b, a, &["L"], []).unwrap();
        g.add_edge(a, b, &["L"], []).unwrap();
        let s = g.stats();
        assert_eq!((s.num_nodes, s.num_edges), (2, 3));
        assert!((s.avg_degree - 1.5).abs() < 1e-12);
    }

    #[test]
    fn dump_is_deterministic_and_sorted() {
        let mut g = Graph::new();
        let a = g.add_node(&["Case"], [("ID", "7".into())]).unwrap();
        let b = g
            .add_node(&["Event"], [("timestamp", 50.into()), ("activity", "ship".into())])
            .unwrap();
        g.add_edge(b, a, &["Event_to_case"], []).unwrap();
        g.freeze();
        assert_eq!(
            g.dump_string(),
            "node 0 [Case] ID=\"7\"\n\
             node 1 [Event] activity=\"ship\" timestamp=50\n\
             edge 0 1->0 [Event_to_case]\n"
        );
    }
}
