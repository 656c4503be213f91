//! Dynamic graphs as streams of events.
//!
//! A dynamic graph is not a static object here but an ordered stream of
//! timestamped atomic changes: nodes and edges appearing and disappearing,
//! attributes changing, step markers advancing the clock. Streams flow from
//! sources (generators, trace files, the mobility simulator) through
//! filters to sinks (an in-memory graph, trace writers, collectors), and
//! algorithms re-optimize their results as the events arrive instead of
//! recomputing from scratch.
//!
//! ```
//! use dynagraph::dgs;
//! use dynagraph::graph::DynamicGraph;
//! use dynagraph::algo::ComponentTracker;
//!
//! let trace = "DGS004\nexample 0 0\nst 0\nae ab a b\nae bc b c\n";
//! let mut graph = DynamicGraph::default();
//! let mut components = ComponentTracker::new();
//! for event in dgs::DgsReader::new(trace.as_bytes())? {
//!     for applied in graph.apply_event(event?)? {
//!         components.apply(&applied)?;
//!     }
//! }
//! assert_eq!(graph.node_count(), 3);
//! assert_eq!(components.count(), 1);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod algo;
pub mod dgs;
pub mod event;
pub mod generate;
pub mod graph;
pub mod mobility;
pub mod rng;
pub mod validate;

pub use algo::{AlgoError, ComponentTracker, SpanningForest, TreeMetrics};
pub use event::{
    pipe, AttributeValue, Attributes, Collector, CountingSink, EventFilter, EventSink,
    GraphEvent, PassThrough, SharedCollector, StreamError, StripAttributes, Timestamp,
};
pub use generate::{Family, GeneratorSpec};
pub use graph::{DynamicGraph, Edge, GraphError, GraphPolicy, GraphSnapshot, Node};
pub use mobility::MobilityConfig;
pub use validate::{validate_stream, Violation, ViolationKind};
