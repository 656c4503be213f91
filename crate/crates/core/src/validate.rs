//! Stream validation against a graph policy.
//!
//! [`validate_stream`] replays a stream against a shadow store that mirrors
//! [`DynamicGraph`](crate::graph::DynamicGraph) application semantics
//! (including removal cascades and endpoint auto-creation) and reports every
//! violation instead of stopping at the first. A strict graph replay of the
//! same stream under the same policy succeeds exactly when validation
//! returns no violations.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::event::{valid_id, AttributeValue, GraphEvent, Timestamp};
use crate::graph::GraphPolicy;

/// What a single violation is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateNode,
    DuplicateEdge,
    UnknownNode,
    UnknownEdge,
    MissingEndpoint,
    SelfLoopRejected,
    MultiEdgeRejected,
    TimeRegression,
    InvalidIdentifier,
    NonFiniteNumber,
}

/// One violated check, tied to the offending event's position in the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index of the event in the validated stream.
    pub index: usize,
    pub kind: ViolationKind,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "event {}: {}", self.index, self.message)
    }
}

/// Checks a whole stream under `policy` and returns all violations
/// (empty means the stream is valid).
pub fn validate_stream(events: &[GraphEvent], policy: GraphPolicy) -> Vec<Violation> {
    let mut store = ShadowStore::default();
    let mut out = Vec::new();
    for (index, event) in events.iter().enumerate() {
        let found = check_event(&store, policy, event);
        let clean = found.is_empty();
        out.extend(found.into_iter().map(|(kind, message)| Violation {
            index,
            kind,
            message,
        }));
        if clean {
            store.apply(event, policy);
        }
    }
    out
}

/// Liveness questions a store must answer for per-event checking. Both the
/// real graph and the validator's shadow store implement this, so the two
/// paths can never disagree on what counts as a violation.
pub(crate) trait LivenessView {
    fn node_alive(&self, id: &str) -> bool;
    fn edge_alive(&self, id: &str) -> bool;
    /// True when some alive edge connects the unordered pair `{a, b}`.
    fn pair_has_edge(&self, a: &str, b: &str) -> bool;
    fn current_time(&self) -> Timestamp;
}

fn check_value(key: &str, value: Option<&AttributeValue>, out: &mut Vec<(ViolationKind, String)>) {
    if !valid_id(key) {
        out.push((
            ViolationKind::InvalidIdentifier,
            format!("attribute key `{key}` is not a valid identifier"),
        ));
    }
    if let Some(v) = value {
        if !v.is_finite_deep() {
            out.push((
                ViolationKind::NonFiniteNumber,
                format!("attribute `{key}` holds a non-finite number"),
            ));
        }
    }
}

fn check_attrs(attrs: &crate::event::Attributes, out: &mut Vec<(ViolationKind, String)>) {
    for (key, value) in attrs {
        check_value(key, Some(value), out);
    }
}

fn check_id(id: &str, what: &str, out: &mut Vec<(ViolationKind, String)>) {
    if !valid_id(id) {
        out.push((
            ViolationKind::InvalidIdentifier,
            format!("{what} `{id}` is not a valid identifier"),
        ));
    }
}

/// Checks one event against the current store state; returns all violated
/// checks, empty when the event may be applied.
pub(crate) fn check_event(
    view: &dyn LivenessView,
    policy: GraphPolicy,
    event: &GraphEvent,
) -> Vec<(ViolationKind, String)> {
    let mut out = Vec::new();
    match event {
        GraphEvent::NodeAdded { node_id, attrs } => {
            check_id(node_id, "node id", &mut out);
            check_attrs(attrs, &mut out);
            if view.node_alive(node_id) {
                out.push((
                    ViolationKind::DuplicateNode,
                    format!("node `{node_id}` is already alive"),
                ));
            }
        }
        GraphEvent::NodeRemoved { node_id } => {
            check_id(node_id, "node id", &mut out);
            if !view.node_alive(node_id) {
                out.push((
                    ViolationKind::UnknownNode,
                    format!("cannot remove node `{node_id}`: not alive"),
                ));
            }
        }
        GraphEvent::EdgeAdded {
            edge_id,
            src_id,
            dst_id,
            attrs,
            ..
        } => {
            check_id(edge_id, "edge id", &mut out);
            check_id(src_id, "source node id", &mut out);
            check_id(dst_id, "target node id", &mut out);
            check_attrs(attrs, &mut out);
            if edge_id == src_id || edge_id == dst_id {
                out.push((
                    ViolationKind::InvalidIdentifier,
                    format!("edge id `{edge_id}` collides with one of its endpoint ids"),
                ));
            }
            if view.edge_alive(edge_id) {
                out.push((
                    ViolationKind::DuplicateEdge,
                    format!("edge `{edge_id}` is already alive"),
                ));
            }
            if src_id == dst_id && !policy.allow_self_loops {
                out.push((
                    ViolationKind::SelfLoopRejected,
                    format!("self-loop on `{src_id}` is not allowed by policy"),
                ));
            }
            if !policy.auto_create {
                for endpoint in [src_id, dst_id] {
                    if !view.node_alive(endpoint) {
                        out.push((
                            ViolationKind::MissingEndpoint,
                            format!("edge `{edge_id}` references missing node `{endpoint}`"),
                        ));
                    }
                }
            }
            if !policy.allow_multi_edges && view.pair_has_edge(src_id, dst_id) {
                out.push((
                    ViolationKind::MultiEdgeRejected,
                    format!("a second edge between `{src_id}` and `{dst_id}` is not allowed by policy"),
                ));
            }
        }
        GraphEvent::EdgeRemoved { edge_id } => {
            check_id(edge_id, "edge id", &mut out);
            if !view.edge_alive(edge_id) {
                out.push((
                    ViolationKind::UnknownEdge,
                    format!("cannot remove edge `{edge_id}`: not alive"),
                ));
            }
        }
        GraphEvent::NodeAttrChanged {
            node_id,
            key,
            value,
        } => {
            check_id(node_id, "node id", &mut out);
            check_value(key, value.as_ref(), &mut out);
            if !view.node_alive(node_id) {
                out.push((
                    ViolationKind::UnknownNode,
                    format!("attribute change targets missing node `{node_id}`"),
                ));
            }
        }
        GraphEvent::EdgeAttrChanged {
            edge_id,
            key,
            value,
        } => {
            check_id(edge_id, "edge id", &mut out);
            check_value(key, value.as_ref(), &mut out);
            if !view.edge_alive(edge_id) {
                out.push((
                    ViolationKind::UnknownEdge,
                    format!("attribute change targets missing edge `{edge_id}`"),
                ));
            }
        }
        GraphEvent::GraphAttrChanged { key, value } => {
            check_value(key, value.as_ref(), &mut out);
        }
        GraphEvent::StepBegins { time } => {
            if *time < view.current_time() {
                out.push((
                    ViolationKind::TimeRegression,
                    format!(
                        "step time {} is smaller than the previous step time {}",
                        time,
                        view.current_time()
                    ),
                ));
            }
        }
    }
    out
}

pub(crate) fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Minimal liveness mirror of the real store: ids, endpoints, and time only.
/// Memory stays proportional to the number of alive ids, not stream length.
#[derive(Default)]
struct ShadowStore {
    nodes: HashSet<String>,
    edges: HashMap<String, (String, String)>,
    incident: HashMap<String, BTreeSet<String>>,
    pairs: HashMap<(String, String), u32>,
    time: Timestamp,
}

impl ShadowStore {
    fn remove_edge(&mut self, edge_id: &str) {
        if let Some((src, dst)) = self.edges.remove(edge_id) {
            for endpoint in [&src, &dst] {
                if let Some(set) = self.incident.get_mut(endpoint.as_str()) {
                    set.remove(edge_id);
                }
            }
            let key = pair_key(&src, &dst);
            if let Some(count) = self.pairs.get_mut(&key) {
                *count -= 1;
                if *count == 0 {
                    self.pairs.remove(&key);
                }
            }
        }
    }

    /// Applies an event already known to be violation-free, mirroring the
    /// real store: removals cascade, missing endpoints get auto-created.
    fn apply(&mut self, event: &GraphEvent, policy: GraphPolicy) {
        match event {
            GraphEvent::NodeAdded { node_id, .. } => {
                self.nodes.insert(node_id.clone());
            }
            GraphEvent::NodeRemoved { node_id } => {
                let incident: Vec<String> = self
                    .incident
                    .remove(node_id)
                    .map(|set| set.into_iter().collect())
                    .unwrap_or_default();
                for edge_id in incident {
                    self.remove_edge(&edge_id);
                }
                self.nodes.remove(node_id);
            }
            GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                ..
            } => {
                if policy.auto_create {
                    self.nodes.insert(src_id.clone());
                    self.nodes.insert(dst_id.clone());
                }
                self.edges
                    .insert(edge_id.clone(), (src_id.clone(), dst_id.clone()));
                for endpoint in [src_id, dst_id] {
                    self.incident
                        .entry(endpoint.clone())
                        .or_default()
                        .insert(edge_id.clone());
                }
                *self.pairs.entry(pair_key(src_id, dst_id)).or_insert(0) += 1;
            }
            GraphEvent::EdgeRemoved { edge_id } => {
                self.remove_edge(edge_id);
            }
            GraphEvent::StepBegins { time } => {
                self.time = *time;
            }
            GraphEvent::NodeAttrChanged { .. }
            | GraphEvent::EdgeAttrChanged { .. }
            | GraphEvent::GraphAttrChanged { .. } => {}
        }
    }
}

impl LivenessView for ShadowStore {
    fn node_alive(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    fn edge_alive(&self, id: &str) -> bool {
        self.edges.contains_key(id)
    }

    fn pair_has_edge(&self, a: &str, b: &str) -> bool {
        self.pairs.contains_key(&pair_key(a, b))
    }

    fn current_time(&self) -> Timestamp {
        self.time
    }
}
