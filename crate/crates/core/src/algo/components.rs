//! Incrementally maintained connected-component count.
//!
//! The tracker consumes the same applied-event stream as the graph it
//! shadows (feed it what [`DynamicGraph::apply_event`] returned, or attach
//! it downstream) and keeps the component count current without a full
//! recount per event. Additions merge labels by relabeling the smaller
//! side; a removal that may split runs a bidirectional search from both
//! endpoints, bounded by the smaller resulting side.
//!
//! Edges are treated as undirected for connectivity regardless of their
//! directed flag.
//!
//! [`DynamicGraph::apply_event`]: crate::graph::DynamicGraph::apply_event

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::AlgoError;
use crate::event::GraphEvent;

/// Component label per alive node plus the running component count.
#[derive(Debug, Clone, Default)]
pub struct ComponentTracker {
    comp_of: HashMap<String, u64>,
    comp_size: HashMap<u64, usize>,
    edges: HashMap<String, (String, String)>,
    /// node → neighbor → number of parallel alive edges
    adj: HashMap<String, HashMap<String, u32>>,
    /// node → ids of alive incident edges
    incident: HashMap<String, BTreeSet<String>>,
    next_comp: u64,
}

impl ComponentTracker {
    pub fn new() -> Self {
        ComponentTracker::default()
    }

    /// Current number of connected components.
    pub fn count(&self) -> usize {
        self.comp_size.len()
    }

    pub fn node_count(&self) -> usize {
        self.comp_of.len()
    }

    /// Label of the component containing `node_id`. Labels are stable until
    /// the component merges into a larger one or splits.
    pub fn component_id(&self, node_id: &str) -> Option<u64> {
        self.comp_of.get(node_id).copied()
    }

    /// Applies one event and returns the updated component count.
    pub fn apply(&mut self, event: &GraphEvent) -> Result<usize, AlgoError> {
        match event {
            GraphEvent::NodeAdded { node_id, .. } => {
                if self.comp_of.contains_key(node_id) {
                    return Err(AlgoError::OutOfSync(format!(
                        "node `{node_id}` added twice"
                    )));
                }
                let comp = self.next_comp;
                self.next_comp += 1;
                self.comp_of.insert(node_id.clone(), comp);
                self.comp_size.insert(comp, 1);
                self.incident.entry(node_id.clone()).or_default();
            }
            GraphEvent::NodeRemoved { node_id } => {
                if !self.comp_of.contains_key(node_id) {
                    return Err(AlgoError::UnknownNode {
                        id: node_id.clone(),
                    });
                }
                // Cascade removals normally arrive first; clean up any
                // remaining incident edges so the node is isolated.
                let leftover: Vec<String> = self
                    .incident
                    .get(node_id)
                    .map(|set| set.iter().cloned().collect())
                    .unwrap_or_default();
                for edge_id in leftover {
                    self.apply(&GraphEvent::edge_removed(edge_id))?;
                }
                let comp = self.comp_of.remove(node_id).expect("checked alive");
                self.comp_size.remove(&comp);
                self.incident.remove(node_id);
                self.adj.remove(node_id);
            }
            GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                ..
            } => {
                if self.edges.contains_key(edge_id) {
                    return Err(AlgoError::OutOfSync(format!(
                        "edge `{edge_id}` added twice"
                    )));
                }
                for endpoint in [src_id, dst_id] {
                    if !self.comp_of.contains_key(endpoint) {
                        return Err(AlgoError::OutOfSync(format!(
                            "edge `{edge_id}` references node `{endpoint}` the tracker never saw"
                        )));
                    }
                }
                self.edges
                    .insert(edge_id.clone(), (src_id.clone(), dst_id.clone()));
                for endpoint in [src_id, dst_id] {
                    self.incident
                        .entry(endpoint.clone())
                        .or_default()
                        .insert(edge_id.clone());
                }
                if src_id != dst_id {
                    // Merge first: the relabeling walk must see the graph
                    // without the new edge so it stays inside one side.
                    self.merge_components(src_id, dst_id);
                    *self
                        .adj
                        .entry(src_id.clone())
                        .or_default()
                        .entry(dst_id.clone())
                        .or_insert(0) += 1;
                    *self
                        .adj
                        .entry(dst_id.clone())
                        .or_default()
                        .entry(src_id.clone())
                        .or_insert(0) += 1;
                }
            }
            GraphEvent::EdgeRemoved { edge_id } => {
                let (src, dst) = self
                    .edges
                    .remove(edge_id)
                    .ok_or_else(|| AlgoError::UnknownEdge {
                        id: edge_id.clone(),
                    })?;
                for endpoint in [&src, &dst] {
                    if let Some(set) = self.incident.get_mut(endpoint.as_str()) {
                        set.remove(edge_id);
                    }
                }
                if src != dst {
                    let parallel_left = self.drop_adjacency(&src, &dst);
                    if !parallel_left {
                        self.split_if_disconnected(&src, &dst);
                    }
                }
            }
            GraphEvent::NodeAttrChanged { .. }
            | GraphEvent::EdgeAttrChanged { .. }
            | GraphEvent::GraphAttrChanged { .. }
            | GraphEvent::StepBegins { .. } => {}
        }
        Ok(self.count())
    }

    /// Decrements the parallel-edge count for `{a, b}` and reports whether
    /// any edge still connects the pair directly.
    fn drop_adjacency(&mut self, a: &str, b: &str) -> bool {
        let mut left = false;
        if let Some(neighbors) = self.adj.get_mut(a) {
            if let Some(count) = neighbors.get_mut(b) {
                *count -= 1;
                if *count == 0 {
                    neighbors.remove(b);
                } else {
                    left = true;
                }
            }
        }
        if let Some(neighbors) = self.adj.get_mut(b) {
            if let Some(count) = neighbors.get_mut(a) {
                *count -= 1;
                if *count == 0 {
                    neighbors.remove(a);
                }
            }
        }
        left
    }

    /// Union of the two endpoint components; the smaller side is relabeled.
    fn merge_components(&mut self, a: &str, b: &str) {
        let comp_a = self.comp_of[a];
        let comp_b = self.comp_of[b];
        if comp_a == comp_b {
            return;
        }
        let size_a = self.comp_size[&comp_a];
        let size_b = self.comp_size[&comp_b];
        let (small_root, small_comp, big_comp) = if size_a <= size_b {
            (a, comp_a, comp_b)
        } else {
            (b, comp_b, comp_a)
        };
        let members = self.reachable(small_root);
        for member in &members {
            self.comp_of.insert(member.clone(), big_comp);
        }
        let moved = self.comp_size.remove(&small_comp).expect("known comp");
        *self.comp_size.get_mut(&big_comp).expect("known comp") += moved;
        debug_assert_eq!(moved, members.len());
    }

    /// After the edge `{a, b}` went away: search from both endpoints in
    /// lockstep; the side that exhausts first became its own component and
    /// gets a fresh label. Work is bounded by the smaller side.
    fn split_if_disconnected(&mut self, a: &str, b: &str) {
        let mut side_a = SideSearch::new(a);
        let mut side_b = SideSearch::new(b);
        let exhausted = loop {
            if !side_a.expand_one(&self.adj, &side_b.visited) {
                break side_a.visited;
            }
            if side_a.met {
                return;
            }
            if !side_b.expand_one(&self.adj, &side_a.visited) {
                break side_b.visited;
            }
            if side_b.met {
                return;
            }
        };
        let old_comp = self.comp_of[a];
        let fresh = self.next_comp;
        self.next_comp += 1;
        for member in &exhausted {
            self.comp_of.insert(member.clone(), fresh);
        }
        self.comp_size.insert(fresh, exhausted.len());
        *self.comp_size.get_mut(&old_comp).expect("known comp") -= exhausted.len();
    }

    fn reachable(&self, start: &str) -> Vec<String> {
        let mut visited: HashSet<String> = HashSet::new();
        let mut queue: VecDeque<String> = VecDeque::new();
        visited.insert(start.to_string());
        queue.push_back(start.to_string());
        while let Some(node) = queue.pop_front() {
            if let Some(neighbors) = self.adj.get(&node) {
                for neighbor in neighbors.keys() {
                    if visited.insert(neighbor.clone()) {
                        queue.push_back(neighbor.clone());
                    }
                }
            }
        }
        visited.into_iter().collect()
    }
}

struct SideSearch {
    visited: HashSet<String>,
    queue: VecDeque<String>,
    met: bool,
}

impl SideSearch {
    fn new(start: &str) -> Self {
        let mut visited = HashSet::new();
        visited.insert(start.to_string());
        let mut queue = VecDeque::new();
        queue.push_back(start.to_string());
        SideSearch {
            visited,
            queue,
            met: false,
        }
    }

    /// Expands one frontier node. Returns false when the frontier is empty
    /// (the side is a complete component); sets `met` when it touched the
    /// other side.
    fn expand_one(
        &mut self,
        adj: &HashMap<String, HashMap<String, u32>>,
        other_visited: &HashSet<String>,
    ) -> bool {
        let Some(node) = self.queue.pop_front() else {
            return false;
        };
        if let Some(neighbors) = adj.get(&node) {
            for neighbor in neighbors.keys() {
                if other_visited.contains(neighbor) {
                    self.met = true;
                    return true;
                }
                if self.visited.insert(neighbor.clone()) {
                    self.queue.push_back(neighbor.clone());
                }
            }
        }
        true
    }
}
