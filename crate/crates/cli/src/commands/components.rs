//! `components`: connected-component count while replaying, one line per
//! step group with `--per-step` or the final count alone without it.

use std::path::Path;

use dynagraph::algo::ComponentTracker;
use dynagraph::dgs;
use dynagraph::event::GraphEvent;
use dynagraph::graph::DynamicGraph;
use dynagraph::Timestamp;

use crate::commands::{replay_grouped, ReplayHooks};
use crate::error::CliError;

struct Tracking {
    tracker: ComponentTracker,
    per_step: bool,
}

impl ReplayHooks for Tracking {
    fn on_applied(&mut self, event: &GraphEvent) -> Result<(), CliError> {
        self.tracker.apply(event).map(|_| ()).map_err(CliError::from)
    }

    fn on_group(&mut self, step: Timestamp, _graph: &mut DynamicGraph) -> Result<(), CliError> {
        if self.per_step {
            println!("{step},{}", self.tracker.count());
        }
        Ok(())
    }
}

pub fn run(input: &Path, per_step: bool) -> Result<(), CliError> {
    let reader = dgs::open(input)?;
    let mut graph = DynamicGraph::default();
    let mut hooks = Tracking {
        tracker: ComponentTracker::new(),
        per_step,
    };
    replay_grouped(reader, &mut graph, &mut hooks)?;
    if !per_step {
        println!("{}", hooks.tracker.count());
    }
    Ok(())
}
