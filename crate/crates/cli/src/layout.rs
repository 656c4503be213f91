//! Node placement for static snapshots.
//!
//! Positions come from `x`/`y` node attributes when every node carries them
//! (mobility traces); otherwise a seeded spring embedder computes them:
//! repulsion between all node pairs, attraction along edges, a fixed
//! iteration budget with linearly cooling displacement cap. Both paths are
//! deterministic for a given input and seed.

use std::collections::BTreeMap;

use dynagraph::event::AttributeValue;
use dynagraph::graph::DynamicGraph;
use dynagraph::rng::SplitMix64;

use crate::error::CliError;

/// Canvas and styling knobs for one rendered snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    pub iterations: u32,
    pub node_radius: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: 800.0,
            height: 600.0,
            iterations: 100,
            node_radius: 8.0,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.width > 0.0 && self.height > 0.0 && self.node_radius > 0.0 {
            Ok(())
        } else {
            Err(CliError::Usage(
                "canvas dimensions and node radius must be positive".into(),
            ))
        }
    }

    pub fn margin(&self) -> f64 {
        self.node_radius * 2.0
    }
}

pub type Positions = BTreeMap<String, (f64, f64)>;

/// Canvas positions for every alive node.
pub fn layout_positions(graph: &DynamicGraph, spec: &RenderSpec, seed: u64) -> Positions {
    match attribute_positions(graph) {
        Some(raw) => scale_to_canvas(raw, spec),
        None => force_layout(graph, spec, seed),
    }
}

/// Raw `x`/`y` attribute positions, present only when every node has them.
fn attribute_positions(graph: &DynamicGraph) -> Option<Positions> {
    if graph.node_count() == 0 {
        return None;
    }
    let mut out = Positions::new();
    for node in graph.nodes() {
        let coordinate = |key: &str| match node.attrs.get(key) {
            Some(AttributeValue::Number(v)) if v.is_finite() => Some(*v),
            _ => None,
        };
        out.insert(node.id.clone(), (coordinate("x")?, coordinate("y")?));
    }
    Some(out)
}

/// Maps raw coordinates into the canvas with a uniform scale, centered,
/// keeping a margin of one node diameter. Degenerate extents collapse to
/// the canvas center line.
pub fn scale_to_canvas(raw: Positions, spec: &RenderSpec) -> Positions {
    let margin = spec.margin();
    let min_x = raw.values().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = raw.values().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = raw.values().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = raw.values().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span_x = max_x - min_x;
    let span_y = max_y - min_y;
    let usable_w = spec.width - 2.0 * margin;
    let usable_h = spec.height - 2.0 * margin;
    let scale_x = if span_x > 0.0 { usable_w / span_x } else { f64::INFINITY };
    let scale_y = if span_y > 0.0 { usable_h / span_y } else { f64::INFINITY };
    let scale = scale_x.min(scale_y);
    let scale = if scale.is_finite() { scale } else { 0.0 };
    let offset_x = margin + (usable_w - span_x * scale) / 2.0;
    let offset_y = margin + (usable_h - span_y * scale) / 2.0;
    raw.into_iter()
        .map(|(id, (x, y))| {
            (
                id,
                (offset_x + (x - min_x) * scale, offset_y + (y - min_y) * scale),
            )
        })
        .collect()
}

/// Spring embedder over the current snapshot.
fn force_layout(graph: &DynamicGraph, spec: &RenderSpec, seed: u64) -> Positions {
    let ids: Vec<&str> = graph.nodes().map(|n| n.id.as_str()).collect();
    let n = ids.len();
    if n == 0 {
        return Positions::new();
    }
    let margin = spec.margin();
    let mut rng = SplitMix64::new(seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.next_range_f64(margin, spec.width - margin),
                rng.next_range_f64(margin, spec.height - margin),
            )
        })
        .collect();
    if n == 1 {
        pos[0] = (spec.width / 2.0, spec.height / 2.0);
    }
    let index_of: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .filter(|e| e.src_id != e.dst_id)
        .map(|e| (index_of[e.src_id.as_str()], index_of[e.dst_id.as_str()]))
        .collect();
    let k = 0.6 * (spec.width * spec.height / n as f64).sqrt();
    let initial_temp = 0.1 * spec.width.min(spec.height);
    let iterations = spec.iterations.max(1);
    for iteration in 0..iterations {
        let temp = initial_temp * (1.0 - iteration as f64 / iterations as f64);
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
                let force = k * k / dist;
                let (fx, fy) = (dx / dist * force, dy / dist * force);
                disp[i].0 += fx;
                disp[i].1 += fy;
                disp[j].0 -= fx;
                disp[j].1 -= fy;
            }
        }
        for &(a, b) in &edges {
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
            let force = dist * dist / k;
            let (fx, fy) = (dx / dist * force, dy / dist * force);
            disp[a].0 -= fx;
            disp[a].1 -= fy;
            disp[b].0 += fx;
            disp[b].1 += fy;
        }
        for i in 0..n {
            let (dx, dy) = disp[i];
            let magnitude = (dx * dx + dy * dy).sqrt();
            if magnitude > 0.0 {
                let step = magnitude.min(temp);
                pos[i].0 += dx / magnitude * step;
                pos[i].1 += dy / magnitude * step;
            }
            pos[i].0 = pos[i].0.clamp(margin, spec.width - margin);
            pos[i].1 = pos[i].1.clamp(margin, spec.height - margin);
        }
    }
    ids.into_iter()
        .zip(pos)
        .map(|(id, p)| (id.to_string(), p))
        .collect()
}
