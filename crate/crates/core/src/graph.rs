//! In-memory dynamic graph.
//!
//! [`DynamicGraph`] is a sink (it applies events to its current state) and a
//! filter (it re-emits the events it applied, including any cascade it
//! induced, to a downstream stage). Queries see the current snapshot only;
//! [`DynamicGraph::snapshot`] copies it out for use independent of later
//! events.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::event::{
    Attributes, EventFilter, EventSink, GraphEvent, StreamError, Timestamp,
};
use crate::validate::{check_event, pair_key, LivenessView};

/// How a graph reacts to incoming events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphPolicy {
    /// Create missing edge endpoints instead of rejecting the edge.
    pub auto_create: bool,
    /// Abort on the first violating event instead of skipping it.
    pub strict: bool,
    pub allow_self_loops: bool,
    pub allow_multi_edges: bool,
}

impl Default for GraphPolicy {
    fn default() -> Self {
        GraphPolicy {
            auto_create: true,
            strict: false,
            allow_self_loops: false,
            allow_multi_edges: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub attrs: Attributes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src_id: String,
    pub dst_id: String,
    pub directed: bool,
    pub attrs: Attributes,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.src_id == self.dst_id
    }

    /// The endpoint opposite `node_id`, or `None` when `node_id` is not an
    /// endpoint. A self-loop returns the node itself.
    pub fn other_endpoint(&self, node_id: &str) -> Option<&str> {
        if node_id == self.src_id {
            Some(&self.dst_id)
        } else if node_id == self.dst_id {
            Some(&self.src_id)
        } else {
            None
        }
    }
}

/// Immutable copy of a graph's state at one instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSnapshot {
    pub nodes: BTreeMap<String, Node>,
    pub edges: BTreeMap<String, Edge>,
    pub graph_attrs: Attributes,
    pub now: Timestamp,
}

#[derive(Debug, Error)]
pub enum GraphError {
    /// Raised under `strict` policy; names the event and every failed check.
    #[error("rejected event {event}: {reasons}")]
    Violation { event: String, reasons: String },
    #[error("unknown node id `{id}`")]
    UnknownNode { id: String },
    #[error("downstream stage failed: {0}")]
    Downstream(StreamError),
}

/// Event-driven graph store with policy-controlled tolerance.
///
/// Violating events are skipped and counted under the default lenient
/// policy, or abort with [`GraphError::Violation`] under `strict`. Every
/// applied event (synthesized endpoint creations and removal cascades
/// included) is forwarded to the optional downstream sink in application
/// order.
pub struct DynamicGraph {
    nodes: BTreeMap<String, Node>,
    edges: BTreeMap<String, Edge>,
    /// node id → ids of alive incident edges
    incidence: BTreeMap<String, BTreeSet<String>>,
    /// normalized endpoint pair → number of alive edges between them
    pair_count: HashMap<(String, String), u32>,
    graph_attrs: Attributes,
    now: Timestamp,
    policy: GraphPolicy,
    downstream: Option<Box<dyn EventSink + Send>>,
    skipped: u64,
}

impl fmt::Debug for DynamicGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DynamicGraph")
            .field("nodes", &self.nodes.len())
            .field("edges", &self.edges.len())
            .field("now", &self.now)
            .field("policy", &self.policy)
            .field("skipped", &self.skipped)
            .finish()
    }
}

impl Default for DynamicGraph {
    fn default() -> Self {
        DynamicGraph::new(GraphPolicy::default())
    }
}

impl DynamicGraph {
    pub fn new(policy: GraphPolicy) -> Self {
        DynamicGraph {
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            incidence: BTreeMap::new(),
            pair_count: HashMap::new(),
            graph_attrs: Attributes::new(),
            now: Timestamp::ZERO,
            policy,
            downstream: None,
            skipped: 0,
        }
    }

    /// Attaches a sink that will receive every applied event from now on.
    /// The bound keeps a graph transferable between threads between runs.
    pub fn set_downstream(&mut self, sink: Box<dyn EventSink + Send>) {
        self.downstream = Some(sink);
    }

    pub fn take_downstream(&mut self) -> Option<Box<dyn EventSink + Send>> {
        self.downstream.take()
    }

    pub fn policy(&self) -> GraphPolicy {
        self.policy
    }

    /// Events skipped so far under the lenient policy.
    pub fn skipped_events(&self) -> u64 {
        self.skipped
    }

    pub fn now(&self) -> Timestamp {
        self.now
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn graph_attrs(&self) -> &Attributes {
        &self.graph_attrs
    }

    /// Applies one event.
    ///
    /// Returns the events actually applied, in order: synthesized
    /// `NodeAdded` events precede an auto-creating `EdgeAdded`, and cascade
    /// `EdgeRemoved` events precede their `NodeRemoved`. A skipped event
    /// returns an empty list. The same list is forwarded downstream.
    pub fn apply_event(&mut self, event: GraphEvent) -> Result<Vec<GraphEvent>, GraphError> {
        let violations = check_event(self, self.policy, &event);
        if !violations.is_empty() {
            if self.policy.strict {
                return Err(GraphError::Violation {
                    event: format!("{event:?}"),
                    reasons: violations
                        .into_iter()
                        .map(|(_, message)| message)
                        .collect::<Vec<_>>()
                        .join("; "),
                });
            }
            self.skipped += 1;
            return Ok(Vec::new());
        }

        let expanded = self.expand(event);
        for applied in &expanded {
            self.apply_unchecked(applied);
        }
        if let Some(sink) = self.downstream.as_mut() {
            for applied in &expanded {
                sink.receive(applied.clone())
                    .map_err(GraphError::Downstream)?;
            }
        }
        Ok(expanded)
    }

    /// Convenience for an undirected, attribute-free edge, mirroring
    /// `apply_event(EdgeAdded { .. })` under the graph's policy.
    pub fn add_edge(
        &mut self,
        edge_id: impl Into<String>,
        src_id: impl Into<String>,
        dst_id: impl Into<String>,
    ) -> Result<(), GraphError> {
        self.apply_event(GraphEvent::edge_added(edge_id, src_id, dst_id))
            .map(|_| ())
    }

    pub fn add_node(&mut self, node_id: impl Into<String>) -> Result<(), GraphError> {
        self.apply_event(GraphEvent::node_added(node_id)).map(|_| ())
    }

    /// Number of alive incident edges; a self-loop counts twice.
    pub fn degree(&self, node_id: &str) -> Result<usize, GraphError> {
        if !self.nodes.contains_key(node_id) {
            return Err(GraphError::UnknownNode {
                id: node_id.to_string(),
            });
        }
        Ok(self
            .incidence
            .get(node_id)
            .map(|edges| {
                edges
                    .iter()
                    .map(|edge_id| if self.edges[edge_id].is_self_loop() { 2 } else { 1 })
                    .sum()
            })
            .unwrap_or(0))
    }

    /// Ids of nodes sharing an alive edge with `node_id` (itself, for a
    /// self-loop).
    pub fn neighbors(&self, node_id: &str) -> Result<BTreeSet<String>, GraphError> {
        if !self.nodes.contains_key(node_id) {
            return Err(GraphError::UnknownNode {
                id: node_id.to_string(),
            });
        }
        let mut out = BTreeSet::new();
        if let Some(edges) = self.incidence.get(node_id) {
            for edge_id in edges {
                if let Some(other) = self.edges[edge_id].other_endpoint(node_id) {
                    out.insert(other.to_string());
                }
            }
        }
        Ok(out)
    }

    pub fn snapshot(&self) -> GraphSnapshot {
        GraphSnapshot {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            graph_attrs: self.graph_attrs.clone(),
            now: self.now,
        }
    }

    /// Expands an event into the full list to apply: endpoint creations
    /// before an auto-creating edge, cascade edge removals (in id order)
    /// before a node removal.
    fn expand(&self, event: GraphEvent) -> Vec<GraphEvent> {
        match &event {
            GraphEvent::EdgeAdded { src_id, dst_id, .. } => {
                let mut out = Vec::new();
                for endpoint in [src_id, dst_id] {
                    if !self.nodes.contains_key(endpoint.as_str())
                        && !out.iter().any(|e| {
                            matches!(e, GraphEvent::NodeAdded { node_id, .. } if node_id == endpoint)
                        })
                    {
                        out.push(GraphEvent::node_added(endpoint.clone()));
                    }
                }
                out.push(event);
                out
            }
            GraphEvent::NodeRemoved { node_id } => {
                let mut out: Vec<GraphEvent> = self
                    .incidence
                    .get(node_id.as_str())
                    .map(|edges| edges.iter().map(GraphEvent::edge_removed).collect())
                    .unwrap_or_default();
                out.push(event);
                out
            }
            _ => vec![event],
        }
    }

    fn apply_unchecked(&mut self, event: &GraphEvent) {
        match event {
            GraphEvent::NodeAdded { node_id, attrs } => {
                self.nodes.insert(
                    node_id.clone(),
                    Node {
                        id: node_id.clone(),
                        attrs: attrs.clone(),
                    },
                );
                self.incidence.entry(node_id.clone()).or_default();
            }
            GraphEvent::NodeRemoved { node_id } => {
                debug_assert!(
                    self.incidence
                        .get(node_id.as_str())
                        .is_none_or(|edges| edges.is_empty()),
                    "cascade must run before node removal"
                );
                self.incidence.remove(node_id.as_str());
                self.nodes.remove(node_id.as_str());
            }
            GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                directed,
                attrs,
            } => {
                self.edges.insert(
                    edge_id.clone(),
                    Edge {
                        id: edge_id.clone(),
                        src_id: src_id.clone(),
                        dst_id: dst_id.clone(),
                        directed: *directed,
                        attrs: attrs.clone(),
                    },
                );
                for endpoint in [src_id, dst_id] {
                    self.incidence
                        .entry(endpoint.clone())
                        .or_default()
                        .insert(edge_id.clone());
                }
                *self.pair_count.entry(pair_key(src_id, dst_id)).or_insert(0) += 1;
            }
            GraphEvent::EdgeRemoved { edge_id } => {
                if let Some(edge) = self.edges.remove(edge_id.as_str()) {
                    for endpoint in [&edge.src_id, &edge.dst_id] {
                        if let Some(set) = self.incidence.get_mut(endpoint.as_str()) {
                            set.remove(edge_id.as_str());
                        }
                    }
                    let key = pair_key(&edge.src_id, &edge.dst_id);
                    if let Some(count) = self.pair_count.get_mut(&key) {
                        *count -= 1;
                        if *count == 0 {
                            self.pair_count.remove(&key);
                        }
                    }
                }
            }
            GraphEvent::NodeAttrChanged {
                node_id,
                key,
                value,
            } => {
                if let Some(node) = self.nodes.get_mut(node_id.as_str()) {
                    match value {
                        Some(v) => {
                            node.attrs.insert(key.clone(), v.clone());
                        }
                        None => {
                            node.attrs.remove(key.as_str());
                        }
                    }
                }
            }
            GraphEvent::EdgeAttrChanged {
                edge_id,
                key,
                value,
            } => {
                if let Some(edge) = self.edges.get_mut(edge_id.as_str()) {
                    match value {
                        Some(v) => {
                            edge.attrs.insert(key.clone(), v.clone());
                        }
                        None => {
                            edge.attrs.remove(key.as_str());
                        }
                    }
                }
            }
            GraphEvent::GraphAttrChanged { key, value } => match value {
                Some(v) => {
                    self.graph_attrs.insert(key.clone(), v.clone());
                }
                None => {
                    self.graph_attrs.remove(key.as_str());
                }
            },
            GraphEvent::StepBegins { time } => {
                self.now = *time;
            }
        }
    }
}

impl LivenessView for DynamicGraph {
    fn node_alive(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    fn edge_alive(&self, id: &str) -> bool {
        self.edges.contains_key(id)
    }

    fn pair_has_edge(&self, a: &str, b: &str) -> bool {
        self.pair_count.contains_key(&pair_key(a, b))
    }

    fn current_time(&self) -> Timestamp {
        self.now
    }
}

impl EventSink for DynamicGraph {
    fn receive(&mut self, event: GraphEvent) -> Result<(), StreamError> {
        self.apply_event(event)
            .map(|_| ())
            .map_err(|e| StreamError::new(e.to_string()))
    }
}

/// As a filter, the graph forwards exactly what it applied (including
/// synthesized and cascade events) and swallows what it skipped.
impl EventFilter for DynamicGraph {
    fn filter(
        &mut self,
        event: GraphEvent,
        downstream: &mut dyn EventSink,
    ) -> Result<(), StreamError> {
        let applied = self
            .apply_event(event)
            .map_err(|e| StreamError::new(e.to_string()))?;
        for e in applied {
            downstream.receive(e)?;
        }
        Ok(())
    }
}
