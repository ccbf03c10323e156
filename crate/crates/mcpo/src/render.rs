//! SVG layout drawings.
//!
//! The overlay view places every section side by side and draws its outline,
//! whole panels (light) and off-cuts (dark). The nesting view lays the used
//! stock panels out in a grid with their nested pieces. Both are scaled so
//! the longer side of the drawing is 1000 units, with y pointing up.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use mcpo_core::geometry::{Point, Rect, Ring};

use crate::error::{PipelineError, Result};
use crate::pipeline::RunReport;

pub const VIEWPORT: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Overlay,
    Nesting,
}

enum Shape {
    Ring(Ring),
    Rect(Rect),
}

struct Item {
    class: &'static str,
    shape: Shape,
}

fn bounds(items: &[Item]) -> Rect {
    let mut b: Option<Rect> = None;
    for it in items {
        let r = match &it.shape {
            Shape::Ring(r) => r.bbox(),
            Shape::Rect(r) => *r,
        };
        b = Some(b.map_or(r, |acc| acc.union(&r)));
    }
    b.unwrap_or(Rect::new(0.0, 0.0, 1.0, 1.0))
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn to_svg(items: &[Item]) -> String {
    let b = bounds(items);
    let margin = 0.02 * b.width().max(b.height());
    let (x0, y1) = (b.min.x - margin, b.max.y + margin);
    let (w, h) = (b.width() + 2.0 * margin, b.height() + 2.0 * margin);
    let scale = VIEWPORT / w.max(h);
    let map = |p: Point| (num((p.x - x0) * scale), num((y1 - p.y) * scale));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        num(w * scale),
        num(h * scale),
        num(w * scale),
        num(h * scale)
    );
    out.push_str(
        "<style>\
.outline{fill:none;stroke:#000;stroke-width:1.5}\
.whole{fill:#d9e6f2;stroke:#4a6f8a;stroke-width:0.5}\
.piece{fill:#34597a;stroke:#12293d;stroke-width:0.5}\
.panel{fill:#fff;stroke:#000;stroke-width:1}\
</style>\n",
    );
    for it in items {
        match &it.shape {
            Shape::Rect(r) => {
                let (x, y) = map(Point::new(r.min.x, r.max.y));
                let _ = writeln!(
                    out,
                    r#"<rect class="{}" x="{x}" y="{y}" width="{}" height="{}"/>"#,
                    it.class,
                    num(r.width() * scale),
                    num(r.height() * scale)
                );
            }
            Shape::Ring(r) => {
                let pts: Vec<String> = r
                    .vertices()
                    .iter()
                    .map(|&p| {
                        let (x, y) = map(p);
                        format!("{x},{y}")
                    })
                    .collect();
                let _ = writeln!(out, r#"<polygon class="{}" points="{}"/>"#, it.class, pts.join(" "));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn overlay_items(r: &RunReport) -> Vec<Item> {
    let mut items = Vec::new();
    let mut dx = 0.0;
    for plan in &r.overlays {
        let bb = plan.region.bbox();
        let gap = 0.05 * bb.width().max(bb.height());
        let shift = Point::new(dx - bb.min.x, -bb.min.y);
        for w in plan.whole_rects() {
            items.push(Item { class: "whole", shape: Shape::Rect(w.translate(shift)) });
        }
        for p in &plan.pieces {
            items.push(Item { class: "piece", shape: Shape::Ring(p.source_shape().translate(shift)) });
        }
        for ring in plan.region.rings() {
            items.push(Item { class: "outline", shape: Shape::Ring(ring.translate(shift)) });
        }
        dx += bb.width() + gap;
    }
    items
}

fn nesting_items(r: &RunReport) -> Vec<Item> {
    let plan = &r.result.best_plan;
    let n = plan.containers.len();
    let cols = (1..=n.max(1)).find(|c| c * c >= n).unwrap_or(1);
    let (pw, ph) = (plan.panel.width, plan.panel.height);
    let gap = 0.1 * pw.min(ph);
    let rows = n.div_ceil(cols).max(1);
    let mut items = Vec::new();
    let mut shapes = plan.placed_shapes(&r.pool).peekable();
    for ci in 0..n {
        let (col, row) = (ci % cols, ci / cols);
        let origin = Point::new(col as f64 * (pw + gap), (rows - 1 - row) as f64 * (ph + gap));
        items.push(Item { class: "panel", shape: Shape::Rect(plan.panel.at_origin().translate(origin)) });
        while let Some((_, ring)) = shapes.next_if(|(c, _)| *c == ci) {
            items.push(Item { class: "piece", shape: Shape::Ring(ring.translate(origin)) });
        }
    }
    items
}

pub fn svg_string(r: &RunReport, view: View) -> String {
    match view {
        View::Overlay => to_svg(&overlay_items(r)),
        View::Nesting => to_svg(&nesting_items(r)),
    }
}

pub fn render_layout(r: &RunReport, view: View, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, svg_string(r, view)).map_err(|e| PipelineError::io(path, e))
}
