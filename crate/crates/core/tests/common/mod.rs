//! Shared test kit: reference fixtures, a random valid-stream generator,
//! and brute-force oracles kept independent of the library's incremental
//! code paths.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use dynagraph::event::{AttributeValue, Attributes, GraphEvent};
use dynagraph::graph::{DynamicGraph, GraphPolicy, GraphSnapshot};
use dynagraph::rng::SplitMix64;

/// Hand-checked six-node showcase trace, five step groups at dates
/// 0, 1, 2, 4, 5. Evolution (component counts after each group in
/// parentheses):
///
/// * 0: v1, v2 appear, linked (1)
/// * 1: v3, v4 appear, edge v1-v3 (2: {v1,v2,v3} and {v4})
/// * 2: v2 leaves (cascade kills v1-v2), edge v3-v4 (1: {v1,v3,v4})
/// * 4: v2 is back, v5 appears (3)
/// * 5: v6 appears, edges v5-v6, v4-v6, v2-v4; v1-v3 leaves (2: {v1} alone)
///
/// Final state: 6 nodes, 4 edges {e34, e56, e46, e24}, degree(v4) = 3.
pub fn six_node_trace() -> Vec<GraphEvent> {
    use GraphEvent as E;
    vec![
        E::step(0),
        E::node_added("v1"),
        E::node_added("v2"),
        E::edge_added("e12", "v1", "v2"),
        E::step(1),
        E::node_added("v3"),
        E::node_added("v4"),
        E::edge_added("e13", "v1", "v3"),
        E::step(2),
        E::node_removed("v2"),
        E::edge_added("e34", "v3", "v4"),
        E::step(4),
        E::node_added("v2"),
        E::node_added("v5"),
        E::step(5),
        E::node_added("v6"),
        E::edge_added("e56", "v5", "v6"),
        E::edge_added("e46", "v4", "v6"),
        E::edge_added("e24", "v2", "v4"),
        E::edge_removed("e13"),
    ]
}

/// The same trace in its file form.
pub fn six_node_trace_dgs() -> String {
    dynagraph::dgs::write_dgs(&six_node_trace(), "showcase").expect("fixture is writable")
}

/// Expected per-step component counts for [`six_node_trace`], derived by
/// hand-replay and cross-checked against [`recount_components`] wherever
/// they are asserted.
pub const SIX_NODE_TRACE_STEPS: [(u32, usize); 5] = [(0, 1), (1, 2), (2, 1), (4, 3), (5, 2)];

/// Independent connected-component count: breadth-first over a snapshot,
/// edges taken as undirected.
pub fn recount_components(snapshot: &GraphSnapshot) -> usize {
    let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
    for id in snapshot.nodes.keys() {
        adjacency.entry(id).or_default();
    }
    for edge in snapshot.edges.values() {
        adjacency
            .entry(&edge.src_id)
            .or_default()
            .push(&edge.dst_id);
        adjacency
            .entry(&edge.dst_id)
            .or_default()
            .push(&edge.src_id);
    }
    let mut seen: HashSet<&str> = HashSet::new();
    let mut components = 0;
    for id in snapshot.nodes.keys() {
        if seen.contains(id.as_str()) {
            continue;
        }
        components += 1;
        let mut queue: VecDeque<&str> = VecDeque::new();
        seen.insert(id);
        queue.push_back(id);
        while let Some(node) = queue.pop_front() {
            for &next in adjacency.get(node).into_iter().flatten() {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    components
}

/// Generator of streams that are valid under the default policy *and*
/// under `auto_create = false` (edges only reference alive nodes). Models
/// cascades exactly like the store does.
pub struct StreamGen {
    rng: SplitMix64,
    nodes: Vec<String>,
    edges: Vec<(String, String, String)>,
    pairs: BTreeSet<(String, String)>,
    next_node: usize,
    next_edge: usize,
    time: u32,
}

impl StreamGen {
    pub fn new(seed: u64) -> Self {
        StreamGen {
            rng: SplitMix64::new(seed),
            nodes: Vec::new(),
            edges: Vec::new(),
            pairs: BTreeSet::new(),
            next_node: 0,
            next_edge: 0,
            time: 0,
        }
    }

    pub fn stream(seed: u64, len: usize) -> Vec<GraphEvent> {
        let mut generator = StreamGen::new(seed);
        (0..len).map(|_| generator.next_event()).collect()
    }

    fn pick_index(&mut self, len: usize) -> usize {
        self.rng.next_below(len as u64) as usize
    }

    fn value(&mut self, depth: usize) -> AttributeValue {
        match self.rng.next_below(if depth == 0 { 4 } else { 3 }) {
            0 => {
                let magnitude = self.rng.next_range_f64(-1.0e4, 1.0e4);
                AttributeValue::Number(magnitude)
            }
            1 => {
                let choices = [
                    "",
                    "plain",
                    "with space",
                    "quote\"inside",
                    "back\\slash",
                    "mixed # = { } , chars",
                    "héllo λ",
                ];
                AttributeValue::Text(
                    choices[self.rng.next_below(choices.len() as u64) as usize].to_string(),
                )
            }
            2 => AttributeValue::Flag(self.rng.next_below(2) == 0),
            _ => {
                let len = self.rng.next_below(4) as usize;
                AttributeValue::List((0..len).map(|_| self.value(depth + 1)).collect())
            }
        }
    }

    fn key(&mut self) -> String {
        let keys = ["weight", "label", "color", "size", "état"];
        keys[self.rng.next_below(keys.len() as u64) as usize].to_string()
    }

    fn attrs(&mut self) -> Attributes {
        let len = self.rng.next_below(3);
        (0..len).map(|_| (self.key(), self.value(0))).collect()
    }

    fn remove_edge_entry(&mut self, index: usize) -> String {
        let (id, src, dst) = self.edges.swap_remove(index);
        let pair = if src <= dst { (src, dst) } else { (dst, src) };
        self.pairs.remove(&pair);
        id
    }

    pub fn next_event(&mut self) -> GraphEvent {
        loop {
            match self.rng.next_below(100) {
                0..=19 => {
                    let id = format!("n{}", self.next_node);
                    self.next_node += 1;
                    self.nodes.push(id.clone());
                    let attrs = self.attrs();
                    return GraphEvent::NodeAdded { node_id: id, attrs };
                }
                20..=27 => {
                    if self.nodes.is_empty() {
                        continue;
                    }
                    let index = self.rng.next_below(self.nodes.len() as u64) as usize;
                    let id = self.nodes.swap_remove(index);
                    // Mirror the cascade: incident edges die with the node.
                    let incident: Vec<usize> = self
                        .edges
                        .iter()
                        .enumerate()
                        .filter(|(_, (_, s, d))| *s == id || *d == id)
                        .map(|(i, _)| i)
                        .collect();
                    for index in incident.into_iter().rev() {
                        self.remove_edge_entry(index);
                    }
                    return GraphEvent::NodeRemoved { node_id: id };
                }
                28..=57 => {
                    if self.nodes.len() < 2 {
                        continue;
                    }
                    // A few tries to find an unconnected distinct pair.
                    for _ in 0..8 {
                        let index_a = self.pick_index(self.nodes.len());
                        let index_b = self.pick_index(self.nodes.len());
                        let a = self.nodes[index_a].clone();
                        let b = self.nodes[index_b].clone();
                        if a == b {
                            continue;
                        }
                        let pair = if a <= b {
                            (a.clone(), b.clone())
                        } else {
                            (b.clone(), a.clone())
                        };
                        if self.pairs.contains(&pair) {
                            continue;
                        }
                        let id = format!("e{}", self.next_edge);
                        self.next_edge += 1;
                        self.pairs.insert(pair);
                        self.edges.push((id.clone(), a.clone(), b.clone()));
                        let directed = self.rng.next_below(5) == 0;
                        let attrs = self.attrs();
                        return GraphEvent::EdgeAdded {
                            edge_id: id,
                            src_id: a,
                            dst_id: b,
                            directed,
                            attrs,
                        };
                    }
                    continue;
                }
                58..=69 => {
                    if self.edges.is_empty() {
                        continue;
                    }
                    let index = self.rng.next_below(self.edges.len() as u64) as usize;
                    let id = self.remove_edge_entry(index);
                    return GraphEvent::EdgeRemoved { edge_id: id };
                }
                70..=77 => {
                    if self.nodes.is_empty() {
                        continue;
                    }
                    let index = self.pick_index(self.nodes.len());
                    let node_id = self.nodes[index].clone();
                    let key = self.key();
                    let value = if self.rng.next_below(4) == 0 {
                        None
                    } else {
                        Some(self.value(0))
                    };
                    return GraphEvent::NodeAttrChanged {
                        node_id,
                        key,
                        value,
                    };
                }
                78..=82 => {
                    if self.edges.is_empty() {
                        continue;
                    }
                    let index = self.rng.next_below(self.edges.len() as u64) as usize;
                    let edge_id = self.edges[index].0.clone();
                    let key = self.key();
                    let value = if self.rng.next_below(4) == 0 {
                        None
                    } else {
                        Some(self.value(0))
                    };
                    return GraphEvent::EdgeAttrChanged {
                        edge_id,
                        key,
                        value,
                    };
                }
                83..=85 => {
                    let key = self.key();
                    let value = if self.rng.next_below(4) == 0 {
                        None
                    } else {
                        Some(self.value(0))
                    };
                    return GraphEvent::GraphAttrChanged { key, value };
                }
                _ => {
                    self.time += self.rng.next_below(3) as u32;
                    return GraphEvent::step(self.time);
                }
            }
        }
    }
}

/// Injects one guaranteed liveness violation into a copy of `events`.
/// Ids with spaces cannot collide with generated ids, so the removals
/// always target something dead.
pub fn corrupt_stream(events: &[GraphEvent], seed: u64) -> Vec<GraphEvent> {
    let mut rng = SplitMix64::new(seed);
    let mut out = events.to_vec();
    let position = rng.next_below(out.len() as u64 + 1) as usize;
    match rng.next_below(3) {
        0 => out.insert(position, GraphEvent::node_removed("never.existed")),
        1 => out.insert(position, GraphEvent::edge_removed("never.existed")),
        _ => {
            out.insert(position, GraphEvent::node_added("dup.node"));
            out.insert(position, GraphEvent::node_added("dup.node"));
        }
    }
    out
}

/// Random connected graph: a random attachment tree plus extra edges.
pub fn random_connected_graph(nodes: usize, extra_p: f64, seed: u64) -> DynamicGraph {
    let mut rng = SplitMix64::new(seed);
    let mut graph = DynamicGraph::new(GraphPolicy::default());
    for i in 0..nodes {
        graph.add_node(format!("n{i}")).unwrap();
    }
    for i in 1..nodes {
        let parent = rng.next_below(i as u64) as usize;
        graph
            .add_edge(format!("t{i}"), format!("n{parent}"), format!("n{i}"))
            .unwrap();
    }
    for i in 0..nodes {
        for j in (i + 1)..nodes {
            if rng.next_f64() < extra_p {
                let _ = graph.add_edge(format!("x{i}_{j}"), format!("n{i}"), format!("n{j}"));
            }
        }
    }
    graph
}

/// Random tree on `nodes` nodes as (edge id, src, dst) triples. `shape`
/// biases attachment: 0 = uniform parent, 1 = path-heavy, 2 = star-heavy.
pub fn random_tree_edges(nodes: usize, shape: u64, seed: u64) -> Vec<(String, String, String)> {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for i in 1..nodes {
        let parent = match shape % 3 {
            0 => rng.next_below(i as u64) as usize,
            1 => {
                if rng.next_below(4) == 0 {
                    rng.next_below(i as u64) as usize
                } else {
                    i - 1
                }
            }
            _ => {
                if rng.next_below(4) == 0 {
                    rng.next_below(i as u64) as usize
                } else {
                    0
                }
            }
        };
        edges.push((format!("t{i}"), format!("n{parent}"), format!("n{i}")));
    }
    edges
}

/// Exact tree diameter by all-pairs breadth-first search (the slow oracle).
pub fn brute_force_diameter(nodes: &BTreeSet<String>, adjacency: &BTreeMap<String, BTreeSet<String>>) -> usize {
    let mut best = 0;
    for start in nodes {
        let mut dist: HashMap<&str, usize> = HashMap::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        dist.insert(start, 0);
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            let d = dist[node];
            best = best.max(d);
            for next in adjacency.get(node).into_iter().flatten() {
                if !dist.contains_key(next.as_str()) {
                    dist.insert(next, d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    best
}
