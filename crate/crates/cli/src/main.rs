use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dynagraph::generate::{Family, GeneratorSpec};
use dynagraph::mobility::MobilityConfig;

use dynagraph_cli::commands::{components, forest, generate, render, replay};
use dynagraph_cli::error::CliError;
use dynagraph_cli::layout::RenderSpec;

/// Dynamic graphs as event streams: generate, replay, analyze, draw.
#[derive(Parser)]
#[command(name = "dynagraph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as a trace file.
    Generate {
        #[command(subcommand)]
        family: FamilyCommand,
    },
    /// Replay a trace into a graph and print a summary.
    Replay {
        input: PathBuf,
        /// Abort on the first violating event instead of skipping it.
        #[arg(long)]
        strict: bool,
        /// Also print event and skipped-event counts.
        #[arg(long)]
        stats: bool,
    },
    /// Track the connected-component count while replaying.
    Components {
        input: PathBuf,
        /// Print one `step,count` line per step group.
        #[arg(long)]
        per_step: bool,
    },
    /// Maintain the token spanning forest and export tree metrics as CSV.
    Forest(ForestArgs),
    /// Draw a snapshot of the replayed graph as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenerateCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace name for the header (defaults to the family name).
    #[arg(long)]
    name: Option<String>,
    /// Output path (standard output when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Lattice with edges between 4-neighbors.
    Grid {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Grid with wrap-around edges.
    Torus {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Erdős–Rényi G(n, p).
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Preferential attachment with k edges per new node.
    Preferential {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Random-waypoint mobility run (positions as x/y attributes).
    Mobility {
        #[arg(long, default_value_t = 30)]
        stations: u32,
        #[arg(long, default_value_t = 1000.0)]
        width: f64,
        #[arg(long, default_value_t = 1000.0)]
        height: f64,
        #[arg(long, default_value_t = 150.0)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        v_min: f64,
        #[arg(long, default_value_t = 5.0)]
        v_max: f64,
        #[arg(long, default_value_t = 100)]
        ticks: u32,
        #[command(flatten)]
        common: GenerateCommon,
    },
}

#[derive(Args)]
struct ForestArgs {
    /// Input trace (alternative to --mobility).
    input: Option<PathBuf>,
    /// Simulate a mobility run instead of reading a trace.
    #[arg(long)]
    mobility: bool,
    #[arg(long, default_value_t = 30)]
    stations: u32,
    #[arg(long, default_value_t = 1000.0)]
    width: f64,
    #[arg(long, default_value_t = 1000.0)]
    height: f64,
    #[arg(long, default_value_t = 150.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    v_min: f64,
    #[arg(long, default_value_t = 5.0)]
    v_max: f64,
    #[arg(long, default_value_t = 100)]
    ticks: u32,
    /// Forest rounds applied after each step group.
    #[arg(long, default_value_t = 1)]
    steps_per_tick: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path (standard output when omitted).
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    input: PathBuf,
    /// Render the state after the step group with this time.
    #[arg(long)]
    at: Option<f64>,
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    #[arg(long, default_value_t = 600.0)]
    height: f64,
    /// Spring-embedder iterations (ignored when nodes carry x/y).
    #[arg(long, default_value_t = 100)]
    iterations: u32,
    #[arg(long, default_value_t = 8.0)]
    node_radius: f64,
    /// Maintain the spanning forest and style tree edges / token holders.
    #[arg(long)]
    forest: bool,
    /// Forest rounds applied after each step group (with --forest).
    #[arg(long, default_value_t = 1)]
    steps_per_tick: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw node ids above the circles.
    #[arg(long)]
    labels: bool,
    #[arg(long, short)]
    out: PathBuf,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { family } => {
            if let FamilyCommand::Mobility {
                stations,
                width,
                height,
                radius,
                v_min,
                v_max,
                ticks,
                common,
            } = family
            {
                let cfg = MobilityConfig {
                    stations,
                    width,
                    height,
                    radius,
                    v_min,
                    v_max,
                    ticks,
                    seed: common.seed,
                };
                let name = common.name.as_deref().unwrap_or("mobility");
                return generate::run_mobility(&cfg, name, common.out.as_deref());
            }
            let (family, common, default_name) = match family {
                FamilyCommand::Grid { rows, cols, common } => {
                    (Family::Grid { rows, cols }, common, "grid")
                }
                FamilyCommand::Torus { rows, cols, common } => {
                    (Family::Torus { rows, cols }, common, "torus")
                }
                FamilyCommand::Random { n, p, common } => (
                    Family::Random {
                        nodes: n,
                        edge_probability: p,
                    },
                    common,
                    "random",
                ),
                FamilyCommand::Preferential { n, k, common } => (
                    Family::Preferential {
                        nodes: n,
                        edges_per_node: k,
                    },
                    common,
                    "preferential",
                ),
                FamilyCommand::Mobility { .. } => unreachable!("handled above"),
            };
            let spec = GeneratorSpec {
                family,
                seed: common.seed,
            };
            let name = common.name.as_deref().unwrap_or(default_name);
            generate::run(&spec, name, common.out.as_deref())
        }
        Command::Replay {
            input,
            strict,
            stats,
        } => replay::run(&input, strict, stats),
        Command::Components { input, per_step } => components::run(&input, per_step),
        Command::Forest(args) => {
            let mobility = args.mobility.then_some(MobilityConfig {
                stations: args.stations,
                width: args.width,
                height: args.height,
                radius: args.radius,
                v_min: args.v_min,
                v_max: args.v_max,
                ticks: args.ticks,
                seed: args.seed,
            });
            if mobility.is_some() && args.input.is_some() {
                return Err(CliError::Usage(
                    "give either an input trace or --mobility, not both".into(),
                ));
            }
            forest::run(&forest::ForestOptions {
                input: args.input,
                mobility,
                steps_per_tick: args.steps_per_tick,
                seed: args.seed,
                metrics: args.metrics,
            })
        }
        Command::Render(args) => render::run(&render::RenderOptions {
            input: args.input,
            at: args.at,
            spec: RenderSpec {
                width: args.width,
                height: args.height,
                iterations: args.iterations,
                node_radius: args.node_radius,
            },
            forest: args.forest,
            steps_per_tick: args.steps_per_tick,
            seed: args.seed,
            labels: args.labels,
            out: args.out,
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = if error.use_stderr() { 1 } else { 0 };
            let _ = error.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
