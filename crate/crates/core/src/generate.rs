//! Event-stream sources for classic graph families.
//!
//! Every generated stream starts with a step marker at time 0 followed by
//! the construction events; node ids are `n<i>` and edge ids `e<i>_<j>`
//! with `i < j`. Streams are a pure function of the spec: the same spec
//! (including seed) produces a byte-identical stream.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::event::GraphEvent;
use crate::rng::SplitMix64;

/// Which family to build, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `rows × cols` lattice with edges between 4-neighbors.
    Grid { rows: u32, cols: u32 },
    /// Grid plus wrap-around edges; wrap edges that would duplicate a grid
    /// edge (rows or cols < 3) collapse to a single edge, and degenerate
    /// self-wraps are dropped.
    Torus { rows: u32, cols: u32 },
    /// Erdős–Rényi G(n, p): each unordered pair drawn independently.
    Random { nodes: u32, edge_probability: f64 },
    /// Preferential attachment: a `k`-clique, then each new node attaches
    /// `k` edges to existing nodes chosen with probability proportional to
    /// current degree, sampled without replacement.
    Preferential { nodes: u32, edges_per_node: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

fn node_id(i: usize) -> String {
    format!("n{i}")
}

fn edge_id(i: usize, j: usize) -> String {
    debug_assert!(i < j);
    format!("e{i}_{j}")
}

/// Builds the event stream for `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Vec<GraphEvent>, GeneratorError> {
    let mut events = vec![GraphEvent::step(0)];
    match spec.family {
        Family::Grid { rows, cols } => {
            lattice(rows, cols, false, &mut events)?;
        }
        Family::Torus { rows, cols } => {
            lattice(rows, cols, true, &mut events)?;
        }
        Family::Random {
            nodes,
            edge_probability,
        } => {
            if !(0.0..=1.0).contains(&edge_probability) {
                return Err(GeneratorError::InvalidParams(format!(
                    "edge probability {edge_probability} is outside [0, 1]"
                )));
            }
            let n = nodes as usize;
            for i in 0..n {
                events.push(GraphEvent::node_added(node_id(i)));
            }
            let mut rng = SplitMix64::new(spec.seed);
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.next_f64() < edge_probability {
                        events.push(GraphEvent::edge_added(
                            edge_id(i, j),
                            node_id(i),
                            node_id(j),
                        ));
                    }
                }
            }
        }
        Family::Preferential {
            nodes,
            edges_per_node,
        } => {
            preferential(nodes, edges_per_node, spec.seed, &mut events)?;
        }
    }
    Ok(events)
}

fn lattice(rows: u32, cols: u32, wrap: bool, events: &mut Vec<GraphEvent>) -> Result<(), GeneratorError> {
    if rows == 0 || cols == 0 {
        return Err(GeneratorError::InvalidParams(
            "rows and cols must be at least 1".into(),
        ));
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let index = |r: usize, c: usize| r * cols + c;
    for i in 0..rows * cols {
        events.push(GraphEvent::node_added(node_id(i)));
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut push_edge = |a: usize, b: usize, events: &mut Vec<GraphEvent>| {
        if a == b {
            return;
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if pairs.insert((i, j)) {
            events.push(GraphEvent::edge_added(edge_id(i, j), node_id(i), node_id(j)));
        }
    };
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                push_edge(index(r, c), index(r, c + 1), events);
            }
            if r + 1 < rows {
                push_edge(index(r, c), index(r + 1, c), events);
            }
        }
    }
    if wrap {
        for r in 0..rows {
            push_edge(index(r, cols - 1), index(r, 0), events);
        }
        for c in 0..cols {
            push_edge(index(rows - 1, c), index(0, c), events);
        }
    }
    Ok(())
}

fn preferential(
    nodes: u32,
    edges_per_node: u32,
    seed: u64,
    events: &mut Vec<GraphEvent>,
) -> Result<(), GeneratorError> {
    let n = nodes as usize;
    let k = edges_per_node as usize;
    if n == 0 || k == 0 {
        return Err(GeneratorError::InvalidParams(
            "node count and edges per node must be at least 1".into(),
        ));
    }
    if k > n {
        return Err(GeneratorError::InvalidParams(format!(
            "edges per node ({k}) exceeds node count ({n}): the seed clique cannot be built"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut degree = vec![0u64; n];
    for i in 0..k {
        events.push(GraphEvent::node_added(node_id(i)));
    }
    for i in 0..k {
        for j in (i + 1)..k {
            events.push(GraphEvent::edge_added(edge_id(i, j), node_id(i), node_id(j)));
            degree[i] += 1;
            degree[j] += 1;
        }
    }
    for v in k..n {
        events.push(GraphEvent::node_added(node_id(v)));
        // Weights are the degrees at the start of this node's turn; chosen
        // targets are zeroed out (sampling without replacement).
        let mut weights: Vec<u64> = degree[..v].to_vec();
        let mut targets: Vec<usize> = Vec::with_capacity(k);
        for _ in 0..k {
            let total: u64 = weights.iter().sum();
            let choice = if total == 0 {
                // All remaining candidates have zero weight (fresh graph or
                // every positive-degree node already chosen): fall back to a
                // uniform choice among them.
                let remaining: Vec<usize> =
                    (0..v).filter(|i| !targets.contains(i)).collect();
                remaining[rng.next_below(remaining.len() as u64) as usize]
            } else {
                let mut roll = rng.next_below(total);
                let mut chosen = 0;
                for (i, &w) in weights.iter().enumerate() {
                    if roll < w {
                        chosen = i;
                        break;
                    }
                    roll -= w;
                }
                chosen
            };
            targets.push(choice);
            weights[choice] = 0;
        }
        for &t in &targets {
            events.push(GraphEvent::edge_added(edge_id(t, v), node_id(t), node_id(v)));
            degree[t] += 1;
            degree[v] += 1;
        }
    }
    Ok(())
}
