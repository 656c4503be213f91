//! `generate`: build a graph family or a mobility run and write it as a
//! trace.

use std::path::Path;

use dynagraph::dgs::write_dgs;
use dynagraph::event::GraphEvent;
use dynagraph::generate::{generate, GeneratorSpec};
use dynagraph::mobility::{self, MobilityConfig};

use crate::commands::emit;
use crate::error::CliError;

pub fn run(spec: &GeneratorSpec, name: &str, out: Option<&Path>) -> Result<(), CliError> {
    write_events(&generate(spec)?, name, out)
}

pub fn run_mobility(cfg: &MobilityConfig, name: &str, out: Option<&Path>) -> Result<(), CliError> {
    write_events(&mobility::run(cfg)?, name, out)
}

fn write_events(events: &[GraphEvent], name: &str, out: Option<&Path>) -> Result<(), CliError> {
    let text = write_dgs(events, name)?;
    emit(out, &text)
}
