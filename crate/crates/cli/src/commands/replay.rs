//! `replay`: drive a trace into a graph and summarize the final state.

use std::path::Path;

use dynagraph::dgs;
use dynagraph::graph::{DynamicGraph, GraphPolicy};

use crate::commands::{replay_grouped, NoHooks};
use crate::error::CliError;

pub fn run(input: &Path, strict: bool, stats: bool) -> Result<(), CliError> {
    let reader = dgs::open(input)?;
    let mut graph = DynamicGraph::new(GraphPolicy {
        strict,
        ..GraphPolicy::default()
    });
    let events = replay_grouped(reader, &mut graph, &mut NoHooks)?;
    let mut line = format!(
        "nodes={} edges={} last_step={}",
        graph.node_count(),
        graph.edge_count(),
        graph.now()
    );
    if stats {
        line.push_str(&format!(
            " events={events} skipped={}",
            graph.skipped_events()
        ));
    }
    println!("{line}");
    Ok(())
}
