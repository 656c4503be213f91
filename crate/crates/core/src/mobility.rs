//! Random-waypoint mobility event source.
//!
//! Simulates stations moving in a rectangular arena. Each station travels
//! in a straight line toward its waypoint at a fixed speed; on arrival it
//! draws a fresh uniform waypoint and a fresh uniform speed. Two stations
//! are linked exactly while their Euclidean distance is at most the
//! communication radius (ties count as connected), so the emitted stream
//! interleaves position attribute updates with proximity-induced edge
//! additions and removals.
//!
//! Station ids are `s<i>`; an edge between stations `a` and `b` has id
//! `l<min>_<max>` with the endpoint ids ordered lexicographically. Tick `t`
//! opens with a step marker at time `t`; tick 0 additionally creates all
//! stations (attributes `x`, `y`) and the initial links. The whole stream
//! is a pure function of the config.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::event::{AttributeValue, Attributes, GraphEvent};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityConfig {
    pub stations: u32,
    /// Arena width in meters.
    pub width: f64,
    /// Arena height in meters.
    pub height: f64,
    /// Communication radius in meters.
    pub radius: f64,
    /// Speed range in meters per tick, drawn uniformly on waypoint arrival.
    pub v_min: f64,
    pub v_max: f64,
    /// Number of ticks to emit (tick 0 included); 0 yields an empty stream.
    pub ticks: u32,
    pub seed: u64,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        MobilityConfig {
            stations: 30,
            width: 1000.0,
            height: 1000.0,
            radius: 150.0,
            v_min: 1.0,
            v_max: 5.0,
            ticks: 100,
            seed: 1,
        }
    }
}

impl MobilityConfig {
    pub fn validate(&self) -> Result<(), MobilityError> {
        let mut problems = Vec::new();
        if self.stations == 0 {
            problems.push("station count must be at least 1".to_string());
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            problems.push(format!("arena width {} must be positive", self.width));
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            problems.push(format!("arena height {} must be positive", self.height));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            problems.push(format!("radius {} must be positive", self.radius));
        }
        if !(self.v_min.is_finite() && self.v_max.is_finite() && self.v_min >= 0.0) {
            problems.push("speeds must be finite and non-negative".to_string());
        } else if self.v_min > self.v_max {
            problems.push(format!(
                "v_min {} exceeds v_max {}",
                self.v_min, self.v_max
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(MobilityError::InvalidConfig(problems.join("; ")))
        }
    }
}

#[derive(Debug, Error)]
pub enum MobilityError {
    #[error("invalid mobility config: {0}")]
    InvalidConfig(String),
}

/// A station's kinematic state.
#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub waypoint_x: f64,
    pub waypoint_y: f64,
    pub speed: f64,
}

/// Unordered id pairs within `radius` of each other; a pair at exactly
/// `radius` counts as connected. Comparison is on squared distances.
pub fn proximity_pairs(stations: &[Station], radius: f64) -> BTreeSet<(String, String)> {
    let mut pairs = BTreeSet::new();
    let limit = radius * radius;
    for (i, a) in stations.iter().enumerate() {
        for b in &stations[i + 1..] {
            let (dx, dy) = (a.x - b.x, a.y - b.y);
            if dx * dx + dy * dy <= limit {
                pairs.insert(ordered_ids(&a.id, &b.id));
            }
        }
    }
    pairs
}

fn ordered_ids(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Edge id for a station pair, endpoints in lexicographic order.
pub fn link_id(a: &str, b: &str) -> String {
    let (lo, hi) = ordered_ids(a, b);
    format!("l{lo}_{hi}")
}

fn position_attrs(station: &Station) -> Attributes {
    [
        ("x".to_string(), AttributeValue::Number(station.x)),
        ("y".to_string(), AttributeValue::Number(station.y)),
    ]
    .into_iter()
    .collect()
}

/// Runs the simulation and returns the full event stream.
pub fn run(cfg: &MobilityConfig) -> Result<Vec<GraphEvent>, MobilityError> {
    cfg.validate()?;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut stations: Vec<Station> = (0..cfg.stations)
        .map(|i| {
            // Per-station draw order: position, waypoint, speed.
            let x = rng.next_range_f64(0.0, cfg.width);
            let y = rng.next_range_f64(0.0, cfg.height);
            let waypoint_x = rng.next_range_f64(0.0, cfg.width);
            let waypoint_y = rng.next_range_f64(0.0, cfg.height);
            let speed = rng.next_range_f64(cfg.v_min, cfg.v_max);
            Station {
                id: format!("s{i}"),
                x,
                y,
                waypoint_x,
                waypoint_y,
                speed,
            }
        })
        .collect();

    let mut events = Vec::new();
    let mut previous_pairs: BTreeSet<(String, String)> = BTreeSet::new();
    for tick in 0..cfg.ticks {
        events.push(GraphEvent::step(tick));
        if tick == 0 {
            for station in &stations {
                events.push(GraphEvent::NodeAdded {
                    node_id: station.id.clone(),
                    attrs: position_attrs(station),
                });
            }
        } else {
            for station in stations.iter_mut() {
                let (old_x, old_y) = (station.x, station.y);
                advance(station, cfg, &mut rng);
                if station.x != old_x || station.y != old_y {
                    events.push(GraphEvent::NodeAttrChanged {
                        node_id: station.id.clone(),
                        key: "x".into(),
                        value: Some(AttributeValue::Number(station.x)),
                    });
                    events.push(GraphEvent::NodeAttrChanged {
                        node_id: station.id.clone(),
                        key: "y".into(),
                        value: Some(AttributeValue::Number(station.y)),
                    });
                }
            }
        }
        let pairs = proximity_pairs(&stations, cfg.radius);
        for (a, b) in previous_pairs.difference(&pairs) {
            events.push(GraphEvent::edge_removed(link_id(a, b)));
        }
        for (a, b) in pairs.difference(&previous_pairs) {
            events.push(GraphEvent::edge_added(link_id(a, b), a.clone(), b.clone()));
        }
        previous_pairs = pairs;
    }
    Ok(events)
}

/// Moves one station `speed` meters toward its waypoint, snapping onto the
/// waypoint when it is closer than one tick of travel and then redrawing
/// waypoint and speed. Positions stay inside the arena because both the
/// current position and the waypoint are inside it.
fn advance(station: &mut Station, cfg: &MobilityConfig, rng: &mut SplitMix64) {
    let dx = station.waypoint_x - station.x;
    let dy = station.waypoint_y - station.y;
    let distance = (dx * dx + dy * dy).sqrt();
    if distance <= station.speed {
        station.x = station.waypoint_x;
        station.y = station.waypoint_y;
        station.waypoint_x = rng.next_range_f64(0.0, cfg.width);
        station.waypoint_y = rng.next_range_f64(0.0, cfg.height);
        station.speed = rng.next_range_f64(cfg.v_min, cfg.v_max);
    } else {
        station.x += station.speed * dx / distance;
        station.y += station.speed * dy / distance;
    }
}
