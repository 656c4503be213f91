//! Replay semantics of the graph store on full streams.

mod common;

use std::collections::BTreeSet;

use common::{six_node_trace, StreamGen, SIX_NODE_TRACE_STEPS};
use dynagraph::event::{Collector, EventFilter, EventSink};
use dynagraph::graph::DynamicGraph;
use dynagraph::validate::validate_stream;
use dynagraph::{GraphEvent, GraphPolicy, Timestamp};

#[test]
fn six_node_trace_reaches_the_expected_final_state() {
    let mut graph = DynamicGraph::default();
    for event in six_node_trace() {
        graph.apply_event(event).unwrap();
    }
    assert_eq!(graph.node_count(), 6);
    assert_eq!(graph.edge_count(), 4);
    let nodes: BTreeSet<&str> = graph.nodes().map(|n| n.id.as_str()).collect();
    assert_eq!(nodes, ["v1", "v2", "v3", "v4", "v5", "v6"].into());
    let edges: BTreeSet<&str> = graph.edges().map(|e| e.id.as_str()).collect();
    assert_eq!(edges, ["e24", "e34", "e46", "e56"].into());
    assert_eq!(graph.degree("v4").unwrap(), 3);
    assert_eq!(
        graph.neighbors("v4").unwrap(),
        ["v2".to_string(), "v3".to_string(), "v6".to_string()].into()
    );
    assert_eq!(graph.now(), Timestamp::new(5.0).unwrap());
    assert_eq!(graph.skipped_events(), 0);
}

#[test]
fn six_node_trace_validates_without_auto_creation() {
    let policy = GraphPolicy {
        auto_create: false,
        ..GraphPolicy::default()
    };
    assert!(validate_stream(&six_node_trace(), policy).is_empty());
}

#[test]
fn removal_at_date_two_cascades_the_first_edge() {
    let mut graph = DynamicGraph::default();
    let mut forwarded = Vec::new();
    for event in six_node_trace() {
        forwarded.extend(graph.apply_event(event).unwrap());
    }
    let position_of = |needle: &GraphEvent| {
        forwarded
            .iter()
            .position(|e| e == needle)
            .expect("event forwarded")
    };
    let cascade = position_of(&GraphEvent::edge_removed("e12"));
    let removal = position_of(&GraphEvent::node_removed("v2"));
    assert!(cascade < removal, "cascade must precede the node removal");
}

/// Replaying a graph's forwarded stream into a second graph reproduces the
/// snapshot exactly, at every prefix of the stream.
#[test]
fn filter_fidelity_on_random_streams() {
    for seed in 0..25 {
        let events = StreamGen::stream(seed, 250);
        let mut original = DynamicGraph::default();
        let mut collected = Collector::new();
        for event in events {
            original.filter(event, &mut collected).unwrap();
        }
        let mut replica = DynamicGraph::default();
        for event in collected.events {
            replica.receive(event).unwrap();
        }
        assert_eq!(original.snapshot(), replica.snapshot(), "seed {seed}");
        assert_eq!(replica.skipped_events(), 0, "forwarded streams are clean");
    }
}

/// Every edge endpoint refers to an alive node after every single event.
#[test]
fn referential_integrity_holds_after_every_event() {
    for seed in 40..55 {
        let events = StreamGen::stream(seed, 300);
        let mut graph = DynamicGraph::default();
        for (index, event) in events.into_iter().enumerate() {
            graph.apply_event(event).unwrap();
            for edge in graph.edges() {
                assert!(
                    graph.node(&edge.src_id).is_some() && graph.node(&edge.dst_id).is_some(),
                    "seed {seed}: dangling endpoint after event {index}"
                );
            }
        }
    }
}

#[test]
fn per_step_counts_of_the_six_node_trace() {
    use dynagraph::algo::ComponentTracker;
    let mut graph = DynamicGraph::default();
    let mut tracker = ComponentTracker::new();
    let mut seen: Vec<(f64, usize)> = Vec::new();
    let mut pending_step: Option<f64> = None;
    for event in six_node_trace() {
        if let GraphEvent::StepBegins { time } = &event {
            if let Some(step) = pending_step.take() {
                seen.push((step, tracker.count()));
            }
            pending_step = Some(time.value());
        }
        for applied in graph.apply_event(event).unwrap() {
            tracker.apply(&applied).unwrap();
        }
    }
    if let Some(step) = pending_step {
        seen.push((step, tracker.count()));
    }
    let expected: Vec<(f64, usize)> = SIX_NODE_TRACE_STEPS
        .iter()
        .map(|&(step, count)| (f64::from(step), count))
        .collect();
    assert_eq!(seen, expected);
}
