//! Trace format round-trip properties.

mod common;

use common::StreamGen;
use dynagraph::dgs::{parse_dgs, write_dgs, DgsReader};
use dynagraph::event::{AttributeValue, Attributes, GraphEvent, Timestamp};
use proptest::prelude::*;

#[test]
fn generated_streams_round_trip() {
    for seed in 0..50 {
        let events = StreamGen::stream(seed, 200);
        let text = write_dgs(&events, "roundtrip").unwrap();
        assert_eq!(parse_dgs(&text).unwrap(), events, "seed {seed}");
    }
}

#[test]
fn streaming_reader_agrees_with_whole_buffer_parsing() {
    let events = StreamGen::stream(99, 400);
    let text = write_dgs(&events, "stream").unwrap();
    let streamed: Vec<GraphEvent> = DgsReader::new(text.as_bytes())
        .unwrap()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(streamed, parse_dgs(&text).unwrap());
}

// Lexically valid identifier for the trace format, including some unicode.
fn id_strategy() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-zA-Z0-9_.:éλ<>{},-]{1,12}").expect("valid regex")
}

fn text_strategy() -> impl Strategy<Value = String> {
    // Anything but line breaks; escapes must survive.
    proptest::string::string_regex("[ -~éλ]{0,16}").expect("valid regex")
}

fn number_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<i32>().prop_map(|i| f64::from(i) / 64.0),
        (any::<i32>(), -300i32..300).prop_map(|(m, e)| f64::from(m) * 10f64.powi(e)),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(0.1 + 0.2),
    ]
    .prop_filter("finite", |v| v.is_finite())
}

fn value_strategy() -> impl Strategy<Value = AttributeValue> {
    let leaf = prop_oneof![
        number_strategy().prop_map(AttributeValue::Number),
        any::<bool>().prop_map(AttributeValue::Flag),
        text_strategy().prop_map(AttributeValue::Text),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        proptest::collection::vec(inner, 0..3).prop_map(AttributeValue::List)
    })
}

fn attrs_strategy() -> impl Strategy<Value = Attributes> {
    proptest::collection::btree_map(id_strategy(), value_strategy(), 0..3)
}

fn event_strategy() -> impl Strategy<Value = GraphEvent> {
    prop_oneof![
        (id_strategy(), attrs_strategy())
            .prop_map(|(node_id, attrs)| GraphEvent::NodeAdded { node_id, attrs }),
        id_strategy().prop_map(|node_id| GraphEvent::NodeRemoved { node_id }),
        (
            id_strategy(),
            id_strategy(),
            id_strategy(),
            any::<bool>(),
            attrs_strategy()
        )
            .prop_map(|(edge_id, src_id, dst_id, directed, attrs)| {
                GraphEvent::EdgeAdded {
                    edge_id,
                    src_id,
                    dst_id,
                    directed,
                    attrs,
                }
            }),
        id_strategy().prop_map(|edge_id| GraphEvent::EdgeRemoved { edge_id }),
        (id_strategy(), id_strategy(), proptest::option::of(value_strategy())).prop_map(
            |(node_id, key, value)| GraphEvent::NodeAttrChanged {
                node_id,
                key,
                value
            }
        ),
        (id_strategy(), id_strategy(), proptest::option::of(value_strategy())).prop_map(
            |(edge_id, key, value)| GraphEvent::EdgeAttrChanged {
                edge_id,
                key,
                value
            }
        ),
        (id_strategy(), proptest::option::of(value_strategy()))
            .prop_map(|(key, value)| GraphEvent::GraphAttrChanged { key, value }),
        (0u32..1_000_000).prop_map(|t| GraphEvent::StepBegins {
            time: Timestamp::from(t)
        }),
        (0u32..1_000_000, 0u32..1000).prop_map(|(whole, frac)| GraphEvent::StepBegins {
            time: Timestamp::new(f64::from(whole) + f64::from(frac) / 1000.0)
                .expect("non-negative finite"),
        }),
    ]
}

proptest! {
    // Round-trip needs only lexical validity, so events here are arbitrary
    // (liveness violations included).
    #[test]
    fn any_writable_stream_round_trips(events in proptest::collection::vec(event_strategy(), 0..40)) {
        let text = write_dgs(&events, "prop").unwrap();
        prop_assert_eq!(parse_dgs(&text).unwrap(), events);
    }
}
