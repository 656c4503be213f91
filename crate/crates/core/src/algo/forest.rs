//! Token-based spanning forest maintenance.
//!
//! A subset of alive edges is marked as tree edges so that the marked edges
//! always form a forest. Each tree has exactly one *token*, held by one of
//! its nodes and acting as the tree's root. The forest reacts to topology
//! events and advances in synchronous rounds:
//!
//! * **edge removed, tree edge**: the tree splits; the endpoint on the
//!   side left without a token mints a fresh token on itself, the endpoint
//!   on the token side only drops the adjacency.
//! * **edge removed, non-tree edge**: bookkeeping only.
//! * **edge added**: recorded as a non-tree edge; merging happens in a
//!   later round.
//! * **round ([`SpanningForest::step`])**: first every token takes one
//!   lazy walk step: it stays put with probability ½, otherwise it moves to
//!   a uniformly random tree neighbor of its holder (a token on a
//!   single-node tree always stays). Then alive edges are scanned in id
//!   order and every non-tree, non-loop edge whose two endpoints both hold
//!   tokens becomes a tree edge: the trees merge and the token on the
//!   lexicographically larger node id disappears.
//!
//! The walk must be lazy: rounds are synchronous, and a non-lazy walk on a
//! two-node tree is deterministic, so neighboring two-node trees can
//! oscillate in opposite phase forever and never present two tokens across
//! one edge. The half-step self-loop breaks that parity with probability 1.
//!
//! New nodes enter as single-node trees holding their own token, so on a
//! static connected graph repeated rounds grow the forest toward a single
//! spanning tree per connected component.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::AlgoError;
use crate::event::GraphEvent;
use crate::graph::DynamicGraph;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
struct ForestNode {
    has_token: bool,
    tree_neighbors: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ForestEdge {
    src: String,
    dst: String,
    in_tree: bool,
}

/// Per-node token/tree-adjacency state plus the alive-edge table it is
/// maintained against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    nodes: BTreeMap<String, ForestNode>,
    edges: BTreeMap<String, ForestEdge>,
    /// node → ids of alive incident edges (tree or not)
    incident: BTreeMap<String, BTreeSet<String>>,
    rng: SplitMix64,
}

impl SpanningForest {
    /// Empty forest over an empty graph.
    pub fn new(seed: u64) -> Self {
        SpanningForest {
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            incident: BTreeMap::new(),
            rng: SplitMix64::new(seed),
        }
    }

    /// State for an existing graph: every alive node is its own one-node
    /// tree holding a token; no edge is a tree edge.
    pub fn init(graph: &DynamicGraph, seed: u64) -> Self {
        let mut forest = SpanningForest::new(seed);
        for node in graph.nodes() {
            forest
                .on_node_added(&node.id)
                .expect("graph node ids are unique");
        }
        for edge in graph.edges() {
            forest
                .on_edge_added(&edge.id, &edge.src_id, &edge.dst_id)
                .expect("graph edges reference alive nodes");
        }
        forest
    }

    /// Rebuilds a forest from explicit parts, checking every invariant.
    /// `edges` items are `(edge_id, src, dst, in_tree)`.
    pub fn from_parts<N, E>(nodes: N, edges: E, seed: u64) -> Result<Self, AlgoError>
    where
        N: IntoIterator<Item = (String, bool)>,
        E: IntoIterator<Item = (String, String, String, bool)>,
    {
        let mut forest = SpanningForest::new(seed);
        for (id, has_token) in nodes {
            if forest
                .nodes
                .insert(
                    id.clone(),
                    ForestNode {
                        has_token,
                        tree_neighbors: BTreeSet::new(),
                    },
                )
                .is_some()
            {
                return Err(AlgoError::InvalidForest(format!("duplicate node `{id}`")));
            }
            forest.incident.entry(id).or_default();
        }
        for (id, src, dst, in_tree) in edges {
            for endpoint in [&src, &dst] {
                if !forest.nodes.contains_key(endpoint.as_str()) {
                    return Err(AlgoError::UnknownNode {
                        id: endpoint.clone(),
                    });
                }
            }
            if forest.edges.contains_key(&id) {
                return Err(AlgoError::InvalidForest(format!("duplicate edge `{id}`")));
            }
            if in_tree {
                forest.link_tree(&src, &dst);
            }
            forest.record_edge(&id, &src, &dst, in_tree);
        }
        forest.verify()?;
        Ok(forest)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn token_count(&self) -> usize {
        self.nodes.values().filter(|n| n.has_token).count()
    }

    pub fn tree_edge_count(&self) -> usize {
        self.edges.values().filter(|e| e.in_tree).count()
    }

    /// Trees = connected components of the tree edges, including isolated
    /// nodes. With the acyclicity invariant this equals nodes − tree edges.
    pub fn tree_count(&self) -> usize {
        self.node_count() - self.tree_edge_count()
    }

    pub fn has_token(&self, node_id: &str) -> Option<bool> {
        self.nodes.get(node_id).map(|n| n.has_token)
    }

    pub fn tree_neighbors(&self, node_id: &str) -> Option<&BTreeSet<String>> {
        self.nodes.get(node_id).map(|n| &n.tree_neighbors)
    }

    pub fn is_tree_edge(&self, edge_id: &str) -> Option<bool> {
        self.edges.get(edge_id).map(|e| e.in_tree)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.keys().map(String::as_str)
    }

    /// Routes a topology event to the matching handler; attribute changes
    /// and step markers are ignored.
    pub fn apply(&mut self, event: &GraphEvent) -> Result<(), AlgoError> {
        match event {
            GraphEvent::NodeAdded { node_id, .. } => self.on_node_added(node_id),
            GraphEvent::NodeRemoved { node_id } => self.on_node_removed(node_id),
            GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                ..
            } => self.on_edge_added(edge_id, src_id, dst_id),
            GraphEvent::EdgeRemoved { edge_id } => self.on_edge_removed(edge_id),
            _ => Ok(()),
        }
    }

    /// A new node forms a one-node tree and mints its own token.
    pub fn on_node_added(&mut self, node_id: &str) -> Result<(), AlgoError> {
        if self.nodes.contains_key(node_id) {
            return Err(AlgoError::OutOfSync(format!(
                "node `{node_id}` added twice"
            )));
        }
        self.nodes.insert(
            node_id.to_string(),
            ForestNode {
                has_token: true,
                tree_neighbors: BTreeSet::new(),
            },
        );
        self.incident.entry(node_id.to_string()).or_default();
        Ok(())
    }

    /// Removes a node; any incident edges that were not removed upstream
    /// are torn down first, so a token-bearing side always survives.
    pub fn on_node_removed(&mut self, node_id: &str) -> Result<(), AlgoError> {
        if !self.nodes.contains_key(node_id) {
            return Err(AlgoError::UnknownNode {
                id: node_id.to_string(),
            });
        }
        let leftover: Vec<String> = self
            .incident
            .get(node_id)
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default();
        for edge_id in leftover {
            self.on_edge_removed(&edge_id)?;
        }
        self.incident.remove(node_id);
        self.nodes.remove(node_id);
        Ok(())
    }

    /// Records a new alive edge as a non-tree edge; no immediate tree
    /// change.
    pub fn on_edge_added(&mut self, edge_id: &str, src: &str, dst: &str) -> Result<(), AlgoError> {
        for endpoint in [src, dst] {
            if !self.nodes.contains_key(endpoint) {
                return Err(AlgoError::UnknownNode {
                    id: endpoint.to_string(),
                });
            }
        }
        if self.edges.contains_key(edge_id) {
            return Err(AlgoError::OutOfSync(format!(
                "edge `{edge_id}` added twice"
            )));
        }
        self.record_edge(edge_id, src, dst, false);
        Ok(())
    }

    /// Removes an alive edge. A non-tree edge is plain bookkeeping. A tree
    /// edge splits its tree: the endpoint whose side kept the token only
    /// drops the adjacency, the endpoint on the token-less side mints a
    /// token on itself.
    pub fn on_edge_removed(&mut self, edge_id: &str) -> Result<(), AlgoError> {
        let edge = self
            .edges
            .remove(edge_id)
            .ok_or_else(|| AlgoError::UnknownEdge {
                id: edge_id.to_string(),
            })?;
        for endpoint in [&edge.src, &edge.dst] {
            if let Some(set) = self.incident.get_mut(endpoint.as_str()) {
                set.remove(edge_id);
            }
        }
        if !edge.in_tree {
            return Ok(());
        }
        self.unlink_tree(&edge.src, &edge.dst);
        let src_side = self.tree_members(&edge.src);
        let token_on_src_side = src_side
            .iter()
            .any(|id| self.nodes[id.as_str()].has_token);
        let minting = if token_on_src_side { &edge.dst } else { &edge.src };
        self.nodes
            .get_mut(minting.as_str())
            .expect("endpoint alive")
            .has_token = true;
        Ok(())
    }

    /// One synchronous round: token walk, then merges.
    pub fn step(&mut self) {
        self.walk_tokens();
        self.merge_trees();
    }

    /// One lazy walk step per token, in holder id order: stay with
    /// probability ½, else move to a uniformly random tree neighbor. A
    /// token on a single-node tree stays without spending randomness.
    /// Token count and tree edges are left unchanged.
    fn walk_tokens(&mut self) {
        let holders: Vec<String> = self
            .nodes
            .iter()
            .filter(|(_, n)| n.has_token)
            .map(|(id, _)| id.clone())
            .collect();
        for holder in holders {
            if self.nodes[holder.as_str()].tree_neighbors.is_empty() {
                continue;
            }
            if self.rng.next_below(2) == 0 {
                continue;
            }
            let target = {
                let neighbors = &self.nodes[holder.as_str()].tree_neighbors;
                let index = self.rng.next_below(neighbors.len() as u64) as usize;
                neighbors.iter().nth(index).expect("index in range").clone()
            };
            self.nodes.get_mut(holder.as_str()).expect("holder alive").has_token = false;
            self.nodes.get_mut(target.as_str()).expect("walk stays on alive tree nodes").has_token =
                true;
        }
    }

    /// Scans alive edges in id order; each non-tree, non-loop edge between
    /// two current token holders becomes a tree edge, merging the two trees
    /// and dropping the token of the lexicographically larger endpoint. A
    /// node whose token just disappeared holds no token, so it cannot merge
    /// again within the round; the surviving holder can.
    fn merge_trees(&mut self) {
        let edge_ids: Vec<String> = self.edges.keys().cloned().collect();
        for edge_id in edge_ids {
            let (src, dst) = {
                let edge = &self.edges[edge_id.as_str()];
                if edge.in_tree || edge.src == edge.dst {
                    continue;
                }
                (edge.src.clone(), edge.dst.clone())
            };
            if !(self.nodes[src.as_str()].has_token && self.nodes[dst.as_str()].has_token) {
                continue;
            }
            // Two token holders always sit in distinct trees, so marking
            // the edge cannot close a cycle.
            self.edges.get_mut(edge_id.as_str()).expect("edge alive").in_tree = true;
            self.link_tree(&src, &dst);
            let loser = if src > dst { &src } else { &dst };
            self.nodes.get_mut(loser.as_str()).expect("endpoint alive").has_token = false;
        }
    }

    fn record_edge(&mut self, edge_id: &str, src: &str, dst: &str, in_tree: bool) {
        self.edges.insert(
            edge_id.to_string(),
            ForestEdge {
                src: src.to_string(),
                dst: dst.to_string(),
                in_tree,
            },
        );
        for endpoint in [src, dst] {
            self.incident
                .entry(endpoint.to_string())
                .or_default()
                .insert(edge_id.to_string());
        }
    }

    fn link_tree(&mut self, a: &str, b: &str) {
        self.nodes
            .get_mut(a)
            .expect("endpoint alive")
            .tree_neighbors
            .insert(b.to_string());
        self.nodes
            .get_mut(b)
            .expect("endpoint alive")
            .tree_neighbors
            .insert(a.to_string());
    }

    fn unlink_tree(&mut self, a: &str, b: &str) {
        self.nodes
            .get_mut(a)
            .expect("endpoint alive")
            .tree_neighbors
            .remove(b);
        self.nodes
            .get_mut(b)
            .expect("endpoint alive")
            .tree_neighbors
            .remove(a);
    }

    /// Nodes of the tree containing `start`, walking tree edges only.
    fn tree_members(&self, start: &str) -> BTreeSet<String> {
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::new();
        members.insert(start.to_string());
        queue.push_back(start.to_string());
        while let Some(node) = queue.pop_front() {
            for neighbor in &self.nodes[node.as_str()].tree_neighbors {
                if members.insert(neighbor.clone()) {
                    queue.push_back(neighbor.clone());
                }
            }
        }
        members
    }

    /// All trees as node sets, smallest node id first.
    pub fn trees(&self) -> Vec<BTreeSet<String>> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out = Vec::new();
        for id in self.nodes.keys() {
            if seen.contains(id.as_str()) {
                continue;
            }
            let members = self.tree_members(id);
            seen.extend(members.iter().cloned());
            out.push(members);
        }
        out
    }

    /// Checks every maintained invariant: tree adjacency is symmetric and
    /// matches the tree edges exactly, tree edges are acyclic, and every
    /// tree holds exactly one token.
    pub fn verify(&self) -> Result<(), AlgoError> {
        let mut edge_pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for (id, edge) in &self.edges {
            if !edge.in_tree {
                continue;
            }
            let pair = normalized(&edge.src, &edge.dst);
            if !edge_pairs.insert(pair) {
                return Err(AlgoError::InvalidForest(format!(
                    "two tree edges between the endpoints of `{id}`"
                )));
            }
            for (a, b) in [(&edge.src, &edge.dst), (&edge.dst, &edge.src)] {
                let node = self
                    .nodes
                    .get(a.as_str())
                    .ok_or_else(|| AlgoError::UnknownNode { id: a.clone() })?;
                if !node.tree_neighbors.contains(b.as_str()) {
                    return Err(AlgoError::InvalidForest(format!(
                        "tree edge `{id}` missing from adjacency of `{a}`"
                    )));
                }
            }
        }
        let mut adjacency_pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for (id, node) in &self.nodes {
            for neighbor in &node.tree_neighbors {
                let other = self.nodes.get(neighbor.as_str()).ok_or_else(|| {
                    AlgoError::InvalidForest(format!(
                        "`{id}` lists dead tree neighbor `{neighbor}`"
                    ))
                })?;
                if !other.tree_neighbors.contains(id.as_str()) {
                    return Err(AlgoError::InvalidForest(format!(
                        "tree adjacency between `{id}` and `{neighbor}` is not symmetric"
                    )));
                }
                adjacency_pairs.insert(normalized(id, neighbor));
            }
        }
        if adjacency_pairs != edge_pairs {
            return Err(AlgoError::InvalidForest(
                "tree adjacency does not match the tree edges".into(),
            ));
        }
        // Forest check: components of the tree edges must satisfy
        // nodes − tree edges = trees; count components and tokens together.
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut components = 0usize;
        for id in self.nodes.keys() {
            if seen.contains(id.as_str()) {
                continue;
            }
            components += 1;
            let members = self.tree_members(id);
            let tokens = members
                .iter()
                .filter(|m| self.nodes[m.as_str()].has_token)
                .count();
            if tokens != 1 {
                return Err(AlgoError::InvalidForest(format!(
                    "tree containing `{id}` holds {tokens} tokens"
                )));
            }
            seen.extend(members);
        }
        if self.node_count() - self.tree_edge_count() != components {
            return Err(AlgoError::InvalidForest(
                "tree edges contain a cycle".into(),
            ));
        }
        Ok(())
    }

    /// Per-size-class tree statistics of the current forest.
    pub fn tree_metrics(&self) -> TreeMetrics {
        let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
        let mut diameter_sum: BTreeMap<usize, usize> = BTreeMap::new();
        let mut inner_degree_sum: BTreeMap<usize, usize> = BTreeMap::new();
        let mut inner_count: BTreeMap<usize, usize> = BTreeMap::new();
        for tree in self.trees() {
            let size = tree.len();
            *histogram.entry(size).or_insert(0) += 1;
            *diameter_sum.entry(size).or_insert(0) += self.tree_diameter(&tree);
            for member in &tree {
                let degree = self.nodes[member.as_str()].tree_neighbors.len();
                if degree >= 2 {
                    *inner_degree_sum.entry(size).or_insert(0) += degree;
                    *inner_count.entry(size).or_insert(0) += 1;
                }
            }
        }
        let avg_diameter_by_size = histogram
            .iter()
            .map(|(&size, &count)| (size, diameter_sum[&size] as f64 / count as f64))
            .collect();
        let avg_inner_degree_by_size = histogram
            .keys()
            .map(|&size| {
                let inner = inner_count.get(&size).copied().unwrap_or(0);
                let avg = if inner == 0 {
                    0.0
                } else {
                    inner_degree_sum[&size] as f64 / inner as f64
                };
                (size, avg)
            })
            .collect();
        TreeMetrics {
            size_histogram: histogram,
            avg_diameter_by_size,
            avg_inner_degree_by_size,
        }
    }

    /// Longest shortest path (in hops) within one tree, by the double
    /// breadth-first sweep: the farthest node from an arbitrary start is an
    /// endpoint of a longest path, and the farthest node from *that* one
    /// realizes the diameter. Exact on trees.
    pub fn tree_diameter(&self, tree: &BTreeSet<String>) -> usize {
        let Some(start) = tree.iter().next() else {
            return 0;
        };
        let (far, _) = self.farthest_in_tree(start);
        let (_, diameter) = self.farthest_in_tree(&far);
        diameter
    }

    fn farthest_in_tree(&self, start: &str) -> (String, usize) {
        let mut dist: BTreeMap<String, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        dist.insert(start.to_string(), 0);
        queue.push_back(start.to_string());
        let mut best = (start.to_string(), 0);
        while let Some(node) = queue.pop_front() {
            let d = dist[node.as_str()];
            if d > best.1 || (d == best.1 && node < best.0) {
                best = (node.clone(), d);
            }
            for neighbor in &self.nodes[node.as_str()].tree_neighbors {
                if !dist.contains_key(neighbor.as_str()) {
                    dist.insert(neighbor.clone(), d + 1);
                    queue.push_back(neighbor.clone());
                }
            }
        }
        best
    }
}

/// Per-size-class statistics over the current trees: how many trees have a
/// given node count, their mean diameter in hops, and the mean tree-degree
/// of their inner nodes (tree-degree ≥ 2). A size class with no inner nodes
/// reports 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeMetrics {
    pub size_histogram: BTreeMap<usize, usize>,
    pub avg_diameter_by_size: BTreeMap<usize, f64>,
    pub avg_inner_degree_by_size: BTreeMap<usize, f64>,
}

impl TreeMetrics {
    /// Total number of trees.
    pub fn tree_total(&self) -> usize {
        self.size_histogram.values().sum()
    }
}

fn normalized(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}
