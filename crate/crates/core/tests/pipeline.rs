//! Pipeline composition properties and validator/replay consistency.

mod common;

use common::{corrupt_stream, StreamGen};
use dynagraph::event::{pipe, Collector, EventFilter, PassThrough, StripAttributes};
use dynagraph::graph::{DynamicGraph, GraphPolicy};
use dynagraph::validate::validate_stream;
use dynagraph::GraphEvent;

fn strict(policy: GraphPolicy) -> GraphPolicy {
    GraphPolicy {
        strict: true,
        ..policy
    }
}

fn strict_replay_succeeds(events: &[GraphEvent], policy: GraphPolicy) -> bool {
    let mut graph = DynamicGraph::new(strict(policy));
    events
        .iter()
        .all(|event| graph.apply_event(event.clone()).is_ok())
}

#[test]
fn pass_through_pipe_preserves_any_stream() {
    for seed in 0..20 {
        let events = StreamGen::stream(seed, 120);
        let mut filters: Vec<Box<dyn EventFilter>> = vec![Box::new(PassThrough)];
        let mut sink = Collector::new();
        pipe(events.clone(), &mut filters, &mut sink).unwrap();
        assert_eq!(sink.events, events);
    }
}

/// Piping through [f, g] at once equals piping through f into a collector
/// and replaying the collected stream through g.
#[test]
fn pipe_composition_is_associative() {
    for seed in 0..20 {
        let events = StreamGen::stream(seed, 150);

        let mut chained: Vec<Box<dyn EventFilter>> =
            vec![Box::new(StripAttributes), Box::new(DynamicGraph::default())];
        let mut chained_sink = Collector::new();
        pipe(events.clone(), &mut chained, &mut chained_sink).unwrap();

        let mut first: Vec<Box<dyn EventFilter>> = vec![Box::new(StripAttributes)];
        let mut intermediate = Collector::new();
        pipe(events, &mut first, &mut intermediate).unwrap();
        let mut second: Vec<Box<dyn EventFilter>> = vec![Box::new(DynamicGraph::default())];
        let mut staged_sink = Collector::new();
        pipe(intermediate.events, &mut second, &mut staged_sink).unwrap();

        assert_eq!(chained_sink.events, staged_sink.events, "seed {seed}");
    }
}

#[test]
fn pipe_into_a_graph_sink_builds_the_final_state() {
    let mut graph = DynamicGraph::default();
    pipe(common::six_node_trace(), &mut [], &mut graph).unwrap();
    assert_eq!(graph.node_count(), 6);
    assert_eq!(graph.edge_count(), 4);
}

#[test]
fn generated_grid_through_an_attribute_dropping_filter() {
    use dynagraph::generate::{generate, Family, GeneratorSpec};
    let events = generate(&GeneratorSpec {
        family: Family::Grid { rows: 2, cols: 2 },
        seed: 0,
    })
    .unwrap();
    let mut filters: Vec<Box<dyn EventFilter>> = vec![Box::new(StripAttributes)];
    let mut graph = DynamicGraph::default();
    pipe(events, &mut filters, &mut graph).unwrap();
    assert_eq!(graph.node_count(), 4);
    assert_eq!(graph.edge_count(), 4);
    assert!(graph.nodes().all(|n| n.attrs.is_empty()));
    assert!(graph.edges().all(|e| e.attrs.is_empty()));
    assert!(graph.graph_attrs().is_empty());
}

#[test]
fn generated_streams_validate_under_a_strict_policy() {
    let policy = GraphPolicy {
        auto_create: false,
        ..GraphPolicy::default()
    };
    for seed in 100..140 {
        let events = StreamGen::stream(seed, 300);
        let violations = validate_stream(&events, policy);
        assert!(violations.is_empty(), "seed {seed}: {violations:?}");
    }
}

/// Strict replay succeeds exactly when validation reports no violations,
/// on both valid streams and streams with an injected violation.
#[test]
fn validation_and_strict_replay_agree() {
    let policies = [
        GraphPolicy::default(),
        GraphPolicy {
            auto_create: false,
            ..GraphPolicy::default()
        },
    ];
    for seed in 0..40 {
        let valid = StreamGen::stream(seed, 200);
        let broken = corrupt_stream(&valid, seed ^ 0xDEAD);
        for policy in policies {
            for events in [&valid, &broken] {
                let validates = validate_stream(events, policy).is_empty();
                let replays = strict_replay_succeeds(events, policy);
                assert_eq!(validates, replays, "seed {seed}, policy {policy:?}");
            }
            assert!(
                !validate_stream(&broken, policy).is_empty(),
                "corruption must be detected (seed {seed})"
            );
        }
    }
}
