//! Dynamic graph algorithms that re-optimize their result as events arrive
//! instead of recomputing from scratch.

pub mod components;
pub mod forest;

pub use components::ComponentTracker;
pub use forest::{SpanningForest, TreeMetrics};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgoError {
    /// The event stream fed to the algorithm does not match the state it
    /// has built so far (missing endpoint, duplicate id, …).
    #[error("state out of sync with event stream: {0}")]
    OutOfSync(String),
    #[error("unknown node `{id}`")]
    UnknownNode { id: String },
    #[error("unknown edge `{id}`")]
    UnknownEdge { id: String },
    /// A forest invariant does not hold.
    #[error("forest invariant violated: {0}")]
    InvalidForest(String),
}
