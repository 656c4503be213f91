//! One module per subcommand plus the shared replay driver.

pub mod components;
pub mod forest;
pub mod generate;
pub mod render;
pub mod replay;

use std::io::BufRead;

use dynagraph::dgs::DgsReader;
use dynagraph::event::GraphEvent;
use dynagraph::graph::DynamicGraph;
use dynagraph::Timestamp;

use crate::error::CliError;

/// Callbacks observed while replaying a trace.
pub(crate) trait ReplayHooks {
    /// Every applied event, cascades included, in application order.
    fn on_applied(&mut self, _event: &GraphEvent) -> Result<(), CliError> {
        Ok(())
    }

    /// A step group closed: the next step marker arrived or the trace
    /// ended. `step` is the group's time.
    fn on_group(&mut self, _step: Timestamp, _graph: &mut DynamicGraph) -> Result<(), CliError> {
        Ok(())
    }
}

/// Hooks that observe nothing.
pub(crate) struct NoHooks;

impl ReplayHooks for NoHooks {}

/// Replays a trace into `graph`, delimiting step groups: a group is the
/// events between two step markers (events before the first marker form an
/// implicit group at time 0). An explicit step marker closes a group even
/// when no events followed it. Returns the number of events read.
pub(crate) fn replay_grouped<R: BufRead>(
    mut reader: DgsReader<R>,
    graph: &mut DynamicGraph,
    hooks: &mut impl ReplayHooks,
) -> Result<u64, CliError> {
    let mut read = 0u64;
    let mut group_time = Timestamp::ZERO;
    let mut group_open = false;
    while let Some(event) = reader.next() {
        let event = event?;
        read += 1;
        if let GraphEvent::StepBegins { time } = &event {
            if group_open {
                hooks.on_group(group_time, graph)?;
            }
            group_time = *time;
        }
        group_open = true;
        let applied = graph
            .apply_event(event)
            .map_err(|e| CliError::Input(format!("line {}: {e}", reader.line())))?;
        for event in &applied {
            hooks.on_applied(event)?;
        }
    }
    if group_open {
        hooks.on_group(group_time, graph)?;
    }
    Ok(read)
}

/// Writes `text` to the path, or to standard output when no path is given.
pub(crate) fn emit(out: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
