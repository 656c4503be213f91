//! Minimal SVG 1.1 snapshot writer.
//!
//! Edges are line segments under the node circles; when a forest state is
//! supplied, tree edges are stroked thicker and darker and token-holding
//! nodes are drawn at double radius. Output is deterministic: elements are
//! emitted in id order with fixed-precision coordinates.

use std::fmt::Write as _;

use dynagraph::algo::SpanningForest;
use dynagraph::graph::DynamicGraph;

use crate::layout::{Positions, RenderSpec};

const PLAIN_EDGE: (&str, f64) = ("#9aa0a6", 1.0);
const TREE_EDGE: (&str, f64) = ("#202124", 3.0);
const NODE_FILL: &str = "#4a86c8";
const TOKEN_FILL: &str = "#c5221f";

pub fn render_svg(
    graph: &DynamicGraph,
    positions: &Positions,
    forest: Option<&SpanningForest>,
    spec: &RenderSpec,
    labels: bool,
) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">",
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{:.0}\" height=\"{:.0}\" fill=\"#ffffff\"/>",
        spec.width, spec.height
    );
    for edge in graph.edges() {
        if edge.is_self_loop() {
            // A loop has no second endpoint to stretch a segment to.
            continue;
        }
        let (Some(src), Some(dst)) = (positions.get(&edge.src_id), positions.get(&edge.dst_id))
        else {
            continue;
        };
        let in_tree = forest
            .and_then(|f| f.is_tree_edge(&edge.id))
            .unwrap_or(false);
        let (stroke, width) = if in_tree { TREE_EDGE } else { PLAIN_EDGE };
        let _ = writeln!(
            out,
            "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{}\" stroke-width=\"{}\"/>",
            src.0, src.1, dst.0, dst.1, stroke, width
        );
    }
    for node in graph.nodes() {
        let Some(&(x, y)) = positions.get(&node.id) else {
            continue;
        };
        let holds_token = forest
            .and_then(|f| f.has_token(&node.id))
            .unwrap_or(false);
        let radius = if holds_token {
            spec.node_radius * 2.0
        } else {
            spec.node_radius
        };
        let fill = if holds_token { TOKEN_FILL } else { NODE_FILL };
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{radius}\" fill=\"{fill}\" stroke=\"#202124\" stroke-width=\"1\"/>"
        );
        if labels {
            let _ = writeln!(
                out,
                "  <text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\">{}</text>",
                x,
                y - radius - 3.0,
                spec.node_radius * 1.5,
                escape_xml(&node.id)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}
