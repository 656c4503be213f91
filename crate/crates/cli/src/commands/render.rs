//! `render`: replay a trace (optionally up to one step) and write a static
//! SVG snapshot. With `--forest` the spanning forest is maintained during
//! the replay and its state styled into the picture.

use std::path::{Path, PathBuf};

use dynagraph::algo::SpanningForest;
use dynagraph::dgs;
use dynagraph::event::GraphEvent;
use dynagraph::graph::DynamicGraph;

use crate::error::CliError;
use crate::layout::{layout_positions, RenderSpec};
use crate::svg::render_svg;

pub struct RenderOptions {
    pub input: PathBuf,
    /// Stop after the step group with this time; the whole trace otherwise.
    pub at: Option<f64>,
    pub spec: RenderSpec,
    pub forest: bool,
    pub steps_per_tick: u32,
    pub seed: u64,
    pub labels: bool,
    pub out: PathBuf,
}

pub fn run(options: &RenderOptions) -> Result<(), CliError> {
    options.spec.validate()?;
    let mut reader = dgs::open(&options.input)?;
    let mut graph = DynamicGraph::default();
    let mut forest = options.forest.then(|| SpanningForest::new(options.seed));
    let mut step_seen = false;
    let mut group_open = false;
    let run_rounds = |forest: &mut Option<SpanningForest>, rounds: u32| {
        if let Some(forest) = forest.as_mut() {
            for _ in 0..rounds {
                forest.step();
            }
        }
    };
    while let Some(event) = reader.next() {
        let event = event?;
        if let GraphEvent::StepBegins { time } = &event {
            if let Some(stop) = options.at {
                if time.value() > stop {
                    break;
                }
                if time.value() == stop {
                    step_seen = true;
                }
            }
            if group_open {
                run_rounds(&mut forest, options.steps_per_tick);
            }
        }
        group_open = true;
        let applied = graph
            .apply_event(event)
            .map_err(|e| CliError::Input(format!("line {}: {e}", reader.line())))?;
        if let Some(forest) = forest.as_mut() {
            for event in &applied {
                forest.apply(event)?;
            }
        }
    }
    if group_open {
        run_rounds(&mut forest, options.steps_per_tick);
    }
    if let Some(stop) = options.at {
        // Events ahead of any marker form the implicit step 0.
        let implicit_zero = stop == 0.0 && group_open;
        if !step_seen && !implicit_zero {
            return Err(CliError::Input(format!(
                "unknown step {stop}: the trace has no step marker with that time"
            )));
        }
    }
    if let Some(forest) = forest.as_ref() {
        forest.verify()?;
    }
    let positions = layout_positions(&graph, &options.spec, options.seed);
    let svg = render_svg(
        &graph,
        &positions,
        forest.as_ref(),
        &options.spec,
        options.labels,
    );
    write_svg(&options.out, &svg)
}

fn write_svg(path: &Path, svg: &str) -> Result<(), CliError> {
    std::fs::write(path, svg)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}
