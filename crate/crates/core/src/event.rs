//! Event vocabulary and the source → filter → sink pipeline contract.
//!
//! A dynamic graph is treated as an ordered stream of atomic change events:
//! node and edge lifecycle, attribute changes, and step markers that carry
//! the stream's clock. Sources produce such streams, filters transform and
//! forward them, sinks consume them one event at a time in stream order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

/// Attribute maps attached to nodes, edges, and the graph itself.
///
/// A `BTreeMap` keeps key iteration in lexicographic order, which makes
/// serialized output deterministic.
pub type Attributes = BTreeMap<String, AttributeValue>;

/// A point on the stream's clock: a finite, non-negative real number.
///
/// Discrete-time streams use integer-valued timestamps; nothing in the
/// pipeline requires them to be integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Timestamp(f64);

impl Timestamp {
    pub const ZERO: Timestamp = Timestamp(0.0);

    /// Returns `None` when `value` is negative, NaN, or infinite.
    pub fn new(value: f64) -> Option<Self> {
        if value.is_finite() && value >= 0.0 {
            Some(Timestamp(value))
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<u32> for Timestamp {
    fn from(value: u32) -> Self {
        Timestamp(f64::from(value))
    }
}

impl PartialEq for Timestamp {
    fn eq(&self, other: &Self) -> bool {
        // Finite by construction, so plain float equality is total.
        self.0 == other.0
    }
}

impl Eq for Timestamp {}

impl PartialOrd for Timestamp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Timestamp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).expect("timestamps are finite")
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Value of a node, edge, or graph attribute.
#[derive(Debug, Clone, PartialEq)]
pub enum AttributeValue {
    /// Double-precision number. Must be finite; NaN and infinities are
    /// rejected at the I/O boundary.
    Number(f64),
    /// UTF-8 string.
    Text(String),
    Flag(bool),
    /// Ordered list; elements may themselves be lists.
    List(Vec<AttributeValue>),
}

impl AttributeValue {
    /// True when every number reachable from this value is finite.
    pub fn is_finite_deep(&self) -> bool {
        match self {
            AttributeValue::Number(n) => n.is_finite(),
            AttributeValue::Text(_) | AttributeValue::Flag(_) => true,
            AttributeValue::List(items) => items.iter().all(AttributeValue::is_finite_deep),
        }
    }
}

// No NaN by invariant, so equality is an equivalence relation.
impl Eq for AttributeValue {}

impl From<f64> for AttributeValue {
    fn from(value: f64) -> Self {
        AttributeValue::Number(value)
    }
}

impl From<&str> for AttributeValue {
    fn from(value: &str) -> Self {
        AttributeValue::Text(value.to_string())
    }
}

impl From<String> for AttributeValue {
    fn from(value: String) -> Self {
        AttributeValue::Text(value)
    }
}

impl From<bool> for AttributeValue {
    fn from(value: bool) -> Self {
        AttributeValue::Flag(value)
    }
}

/// One timestamped atomic change to a graph.
///
/// A `(date, {changes})` couple is encoded as a [`GraphEvent::StepBegins`]
/// marker followed by the couple's change events in listed order; effects
/// apply in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphEvent {
    NodeAdded {
        node_id: String,
        attrs: Attributes,
    },
    NodeRemoved {
        node_id: String,
    },
    EdgeAdded {
        edge_id: String,
        src_id: String,
        dst_id: String,
        directed: bool,
        attrs: Attributes,
    },
    EdgeRemoved {
        edge_id: String,
    },
    /// `value: None` removes the attribute.
    NodeAttrChanged {
        node_id: String,
        key: String,
        value: Option<AttributeValue>,
    },
    EdgeAttrChanged {
        edge_id: String,
        key: String,
        value: Option<AttributeValue>,
    },
    GraphAttrChanged {
        key: String,
        value: Option<AttributeValue>,
    },
    StepBegins {
        time: Timestamp,
    },
}

impl GraphEvent {
    pub fn node_added(node_id: impl Into<String>) -> Self {
        GraphEvent::NodeAdded {
            node_id: node_id.into(),
            attrs: Attributes::new(),
        }
    }

    pub fn node_removed(node_id: impl Into<String>) -> Self {
        GraphEvent::NodeRemoved {
            node_id: node_id.into(),
        }
    }

    /// Undirected edge with no attributes.
    pub fn edge_added(
        edge_id: impl Into<String>,
        src_id: impl Into<String>,
        dst_id: impl Into<String>,
    ) -> Self {
        GraphEvent::EdgeAdded {
            edge_id: edge_id.into(),
            src_id: src_id.into(),
            dst_id: dst_id.into(),
            directed: false,
            attrs: Attributes::new(),
        }
    }

    pub fn edge_removed(edge_id: impl Into<String>) -> Self {
        GraphEvent::EdgeRemoved {
            edge_id: edge_id.into(),
        }
    }

    pub fn step(time: u32) -> Self {
        GraphEvent::StepBegins { time: time.into() }
    }
}

/// Identifier rule shared by all event kinds: non-empty, no whitespace,
/// no double quote. The trace format narrows this further (see `dgs`).
pub fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(|c| c.is_whitespace() || c == '"')
}

/// Diagnostic carried by a pipeline abort. The first stage to fail stops
/// the whole pipe.
#[derive(Debug, Clone, Error)]
#[error("{message}")]
pub struct StreamError {
    pub message: String,
}

impl StreamError {
    pub fn new(message: impl Into<String>) -> Self {
        StreamError {
            message: message.into(),
        }
    }
}

/// Terminal stage: consumes events one at a time, in stream order.
pub trait EventSink {
    fn receive(&mut self, event: GraphEvent) -> Result<(), StreamError>;
}

/// Intermediate stage: consumes an event and forwards zero or more events
/// downstream. A filter must forward every event it does not explicitly
/// transform or drop, preserving order.
pub trait EventFilter {
    fn filter(
        &mut self,
        event: GraphEvent,
        downstream: &mut dyn EventSink,
    ) -> Result<(), StreamError>;
}

/// Drives `source` through `filters` (in order) into `sink`.
///
/// Delivery is per-stage FIFO: each event produced by the source passes
/// through filter 1, its output through filter 2, and so on to the sink.
/// Forwarding stops at the first stage error.
pub fn pipe<I>(
    source: I,
    filters: &mut [Box<dyn EventFilter>],
    sink: &mut dyn EventSink,
) -> Result<(), StreamError>
where
    I: IntoIterator<Item = GraphEvent>,
{
    for event in source {
        feed(event, filters, sink)?;
    }
    Ok(())
}

fn feed(
    event: GraphEvent,
    filters: &mut [Box<dyn EventFilter>],
    sink: &mut dyn EventSink,
) -> Result<(), StreamError> {
    match filters.split_first_mut() {
        None => sink.receive(event),
        Some((first, rest)) => {
            let mut tail = Chain { rest, sink };
            first.filter(event, &mut tail)
        }
    }
}

struct Chain<'a> {
    rest: &'a mut [Box<dyn EventFilter>],
    sink: &'a mut dyn EventSink,
}

impl EventSink for Chain<'_> {
    fn receive(&mut self, event: GraphEvent) -> Result<(), StreamError> {
        feed(event, self.rest, self.sink)
    }
}

/// Sink that stores every event it receives.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Collector {
    pub events: Vec<GraphEvent>,
}

impl Collector {
    pub fn new() -> Self {
        Collector::default()
    }
}

impl EventSink for Collector {
    fn receive(&mut self, event: GraphEvent) -> Result<(), StreamError> {
        self.events.push(event);
        Ok(())
    }
}

/// Collector whose storage outlives the boxed sink handed to a stage.
///
/// Clone it, give one handle to a pipeline (for example as a graph's
/// downstream), and read the events back from the other handle afterwards.
#[derive(Debug, Default, Clone)]
pub struct SharedCollector {
    events: Arc<Mutex<Vec<GraphEvent>>>,
}

impl SharedCollector {
    pub fn new() -> Self {
        SharedCollector::default()
    }

    pub fn events(&self) -> Vec<GraphEvent> {
        self.events.lock().expect("collector mutex poisoned").clone()
    }

    pub fn len(&self) -> usize {
        self.events.lock().expect("collector mutex poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl EventSink for SharedCollector {
    fn receive(&mut self, event: GraphEvent) -> Result<(), StreamError> {
        self.events
            .lock()
            .expect("collector mutex poisoned")
            .push(event);
        Ok(())
    }
}

/// Sink that only counts; used to drain large streams without storing them.
#[derive(Debug, Default, Clone, Copy)]
pub struct CountingSink {
    pub count: u64,
}

impl EventSink for CountingSink {
    fn receive(&mut self, _event: GraphEvent) -> Result<(), StreamError> {
        self.count += 1;
        Ok(())
    }
}

/// Identity filter.
#[derive(Debug, Default, Clone, Copy)]
pub struct PassThrough;

impl EventFilter for PassThrough {
    fn filter(
        &mut self,
        event: GraphEvent,
        downstream: &mut dyn EventSink,
    ) -> Result<(), StreamError> {
        downstream.receive(event)
    }
}

/// Filter that removes all attribute information from the stream: add
/// events are forwarded with empty attribute maps and attribute-change
/// events are dropped.
#[derive(Debug, Default, Clone, Copy)]
pub struct StripAttributes;

impl EventFilter for StripAttributes {
    fn filter(
        &mut self,
        event: GraphEvent,
        downstream: &mut dyn EventSink,
    ) -> Result<(), StreamError> {
        match event {
            GraphEvent::NodeAdded { node_id, .. } => {
                downstream.receive(GraphEvent::node_added(node_id))
            }
            GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                directed,
                ..
            } => downstream.receive(GraphEvent::EdgeAdded {
                edge_id,
                src_id,
                dst_id,
                directed,
                attrs: Attributes::new(),
            }),
            GraphEvent::NodeAttrChanged { .. }
            | GraphEvent::EdgeAttrChanged { .. }
            | GraphEvent::GraphAttrChanged { .. } => Ok(()),
            other => downstream.receive(other),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamp_rejects_negative_and_non_finite() {
        assert!(Timestamp::new(-1.0).is_none());
        assert!(Timestamp::new(f64::NAN).is_none());
        assert!(Timestamp::new(f64::INFINITY).is_none());
        assert_eq!(Timestamp::new(2.5).unwrap().value(), 2.5);
    }

    #[test]
    fn identity_pipe_delivers_source_to_sink() {
        let source = vec![GraphEvent::node_added("A")];
        let mut sink = Collector::new();
        pipe(source.clone(), &mut [], &mut sink).unwrap();
        assert_eq!(sink.events, source);
    }

    #[test]
    fn pass_through_filter_is_identity() {
        let source = vec![
            GraphEvent::step(0),
            GraphEvent::node_added("A"),
            GraphEvent::node_added("B"),
            GraphEvent::edge_added("AB", "A", "B"),
        ];
        let mut filters: Vec<Box<dyn EventFilter>> = vec![Box::new(PassThrough)];
        let mut sink = Collector::new();
        pipe(source.clone(), &mut filters, &mut sink).unwrap();
        assert_eq!(sink.events, source);
    }

    #[test]
    fn strip_attributes_drops_attribute_information() {
        let mut attrs = Attributes::new();
        attrs.insert("w".into(), 1.5.into());
        let source = vec![
            GraphEvent::NodeAdded {
                node_id: "A".into(),
                attrs: attrs.clone(),
            },
            GraphEvent::NodeAttrChanged {
                node_id: "A".into(),
                key: "w".into(),
                value: Some(2.0.into()),
            },
        ];
        let mut filters: Vec<Box<dyn EventFilter>> = vec![Box::new(StripAttributes)];
        let mut sink = Collector::new();
        pipe(source, &mut filters, &mut sink).unwrap();
        assert_eq!(sink.events, vec![GraphEvent::node_added("A")]);
    }

    #[test]
    fn pipe_stops_after_first_abort() {
        struct FailSecond {
            seen: usize,
        }
        impl EventSink for FailSecond {
            fn receive(&mut self, _event: GraphEvent) -> Result<(), StreamError> {
                self.seen += 1;
                if self.seen == 2 {
                    Err(StreamError::new("boom"))
                } else {
                    Ok(())
                }
            }
        }
        let source = vec![
            GraphEvent::node_added("A"),
            GraphEvent::node_added("B"),
            GraphEvent::node_added("C"),
        ];
        let mut sink = FailSecond { seen: 0 };
        let err = pipe(source, &mut [], &mut sink).unwrap_err();
        assert_eq!(err.message, "boom");
        assert_eq!(sink.seen, 2);
    }

    #[test]
    fn id_rule_rejects_whitespace_and_quotes() {
        assert!(valid_id("a.b-c:1"));
        assert!(valid_id("é"));
        assert!(!valid_id(""));
        assert!(!valid_id("a b"));
        assert!(!valid_id("a\"b"));
        assert!(!valid_id("a\tb"));
    }
}
