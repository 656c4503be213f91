//! Oracle checks for the dynamic algorithms and the mobility source.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{
    brute_force_diameter, random_connected_graph, random_tree_edges, recount_components,
    StreamGen,
};
use dynagraph::algo::{ComponentTracker, SpanningForest};
use dynagraph::event::{AttributeValue, GraphEvent};
use dynagraph::graph::{DynamicGraph, GraphPolicy};
use dynagraph::mobility::{self, MobilityConfig};
use dynagraph::validate::validate_stream;

/// The tracker's count equals a from-scratch recount after every event.
#[test]
fn tracker_matches_brute_force_recount_on_random_streams() {
    for seed in 0..20 {
        let events = StreamGen::stream(seed, 200);
        let mut graph = DynamicGraph::default();
        let mut tracker = ComponentTracker::new();
        for (index, event) in events.into_iter().enumerate() {
            for applied in graph.apply_event(event).unwrap() {
                tracker.apply(&applied).unwrap();
            }
            assert_eq!(
                tracker.count(),
                recount_components(&graph.snapshot()),
                "seed {seed}, event {index}"
            );
        }
    }
}

#[test]
fn tracker_handles_multi_edges_and_self_loops() {
    let policy = GraphPolicy {
        allow_self_loops: true,
        allow_multi_edges: true,
        ..GraphPolicy::default()
    };
    let mut graph = DynamicGraph::new(policy);
    let mut tracker = ComponentTracker::new();
    let script = [
        GraphEvent::node_added("a"),
        GraphEvent::node_added("b"),
        GraphEvent::edge_added("e1", "a", "b"),
        GraphEvent::edge_added("e2", "b", "a"),
        GraphEvent::edge_added("loop", "a", "a"),
        GraphEvent::edge_removed("e1"),
        GraphEvent::edge_removed("loop"),
        GraphEvent::edge_removed("e2"),
        GraphEvent::node_removed("b"),
    ];
    for event in script {
        for applied in graph.apply_event(event).unwrap() {
            tracker.apply(&applied).unwrap();
        }
        assert_eq!(tracker.count(), recount_components(&graph.snapshot()));
    }
}

fn forest_trees_nested_in_components(forest: &SpanningForest, tracker: &ComponentTracker) {
    for tree in forest.trees() {
        let mut labels = tree.iter().map(|id| {
            tracker
                .component_id(id)
                .unwrap_or_else(|| panic!("`{id}` unknown to the tracker"))
        });
        let first = labels.next().expect("trees are non-empty");
        assert!(
            labels.all(|label| label == first),
            "tree spans two graph components"
        );
    }
}

/// Random interleaving of graph events and rounds keeps every forest
/// invariant intact, and trees stay inside graph components.
#[test]
fn forest_invariants_survive_random_interleavings() {
    for seed in 0..15 {
        let events = StreamGen::stream(seed, 250);
        let mut graph = DynamicGraph::default();
        let mut tracker = ComponentTracker::new();
        let mut forest = SpanningForest::init(&graph, seed);
        for (index, event) in events.into_iter().enumerate() {
            for applied in graph.apply_event(event).unwrap() {
                tracker.apply(&applied).unwrap();
                forest.apply(&applied).unwrap();
            }
            if index % 3 == 0 {
                forest.step();
            }
            forest
                .verify()
                .unwrap_or_else(|e| panic!("seed {seed}, event {index}: {e}"));
            assert_eq!(forest.token_count(), forest.tree_count());
            forest_trees_nested_in_components(&forest, &tracker);
        }
    }
}

#[test]
fn forest_converges_on_random_connected_graphs() {
    let mut failures = 0;
    for seed in 0..10 {
        let graph = random_connected_graph(15, 0.1, 1000 + seed);
        let mut forest = SpanningForest::init(&graph, seed);
        let mut converged = false;
        for _ in 0..10_000 {
            forest.step();
            if forest.tree_count() == 1 {
                converged = true;
                break;
            }
        }
        if converged {
            assert_eq!(forest.token_count(), 1);
            assert_eq!(forest.tree_edge_count(), graph.node_count() - 1);
            forest.verify().unwrap();
        } else {
            failures += 1;
        }
    }
    assert_eq!(failures, 0, "every 15-node run should converge");
}

/// Double-sweep diameter equals the all-pairs oracle on random trees.
#[test]
fn double_sweep_diameter_matches_all_pairs_oracle() {
    for seed in 0..60u64 {
        let nodes = 2 + (seed % 49) as usize;
        let edges = random_tree_edges(nodes, seed, seed * 31 + 7);
        let forest = SpanningForest::from_parts(
            (0..nodes).map(|i| (format!("n{i}"), i == 0)),
            edges
                .iter()
                .map(|(id, s, d)| (id.clone(), s.clone(), d.clone(), true)),
            0,
        )
        .unwrap();
        let trees = forest.trees();
        assert_eq!(trees.len(), 1);
        let tree = &trees[0];
        let mut adjacency: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (_, src, dst) in &edges {
            adjacency.entry(src.clone()).or_default().insert(dst.clone());
            adjacency.entry(dst.clone()).or_default().insert(src.clone());
        }
        assert_eq!(
            forest.tree_diameter(tree),
            brute_force_diameter(tree, &adjacency),
            "seed {seed}, {nodes} nodes"
        );
    }
}

#[test]
fn mobility_stream_is_valid_without_auto_creation() {
    let cfg = MobilityConfig {
        stations: 12,
        ticks: 60,
        seed: 5,
        ..MobilityConfig::default()
    };
    let events = mobility::run(&cfg).unwrap();
    let policy = GraphPolicy {
        auto_create: false,
        ..GraphPolicy::default()
    };
    assert!(validate_stream(&events, policy).is_empty());
}

/// Replaying the stream and recomputing proximity from the x/y attributes
/// reproduces the alive edge set at every tick.
#[test]
fn mobility_edges_match_positions_at_every_tick() {
    let cfg = MobilityConfig {
        stations: 15,
        width: 400.0,
        height: 300.0,
        radius: 90.0,
        v_min: 0.0,
        v_max: 12.0,
        ticks: 80,
        seed: 21,
    };
    let events = mobility::run(&cfg).unwrap();
    let mut graph = DynamicGraph::default();
    let mut pending: Vec<GraphEvent> = Vec::new();
    let mut checked_ticks = 0;
    let check = |graph: &DynamicGraph| {
        let stations: Vec<mobility::Station> = graph
            .nodes()
            .map(|node| {
                let coordinate = |key: &str| match node.attrs.get(key) {
                    Some(AttributeValue::Number(v)) => *v,
                    other => panic!("node `{}` has bad {key}: {other:?}", node.id),
                };
                mobility::Station {
                    id: node.id.clone(),
                    x: coordinate("x"),
                    y: coordinate("y"),
                    waypoint_x: 0.0,
                    waypoint_y: 0.0,
                    speed: 0.0,
                }
            })
            .collect();
        let expected: BTreeSet<String> = mobility::proximity_pairs(&stations, cfg.radius)
            .iter()
            .map(|(a, b)| mobility::link_id(a, b))
            .collect();
        let alive: BTreeSet<String> = graph.edges().map(|e| e.id.clone()).collect();
        assert_eq!(alive, expected);
    };
    for event in events {
        let is_step = matches!(event, GraphEvent::StepBegins { .. });
        if is_step && !pending.is_empty() {
            for queued in pending.drain(..) {
                graph.apply_event(queued).unwrap();
            }
            check(&graph);
            checked_ticks += 1;
        }
        pending.push(event);
    }
    for queued in pending.drain(..) {
        graph.apply_event(queued).unwrap();
    }
    check(&graph);
    checked_ticks += 1;
    assert_eq!(checked_ticks, cfg.ticks as usize);
}

#[test]
fn forest_runs_deterministically_over_identical_schedules() {
    let run = || {
        let events = StreamGen::stream(7, 150);
        let mut graph = DynamicGraph::default();
        let mut forest = SpanningForest::init(&graph, 1234);
        for (index, event) in events.into_iter().enumerate() {
            for applied in graph.apply_event(event).unwrap() {
                forest.apply(&applied).unwrap();
            }
            if index % 2 == 0 {
                forest.step();
            }
        }
        forest
    };
    assert_eq!(run(), run());
}
