//! Deterministic SVG pictures: vertices on a circle, chords for diagonals.

use std::f64::consts::PI;
use std::fmt::Write as _;

use flipgap::polygon::{Diagonal, FlipPath, PolygonTriangulation};

pub const UPPER_COLOR: &str = "#1f5fbf";
pub const LOWER_COLOR: &str = "#c0392b";
const FRAME: f64 = 240.0;
const RADIUS: f64 = 90.0;
const COLUMNS: usize = 4;

fn point(n: usize, i: usize, cx: f64, cy: f64) -> (f64, f64) {
    let angle = -PI / 2.0 + 2.0 * PI * i as f64 / n as f64;
    (cx + RADIUS * angle.cos(), cy + RADIUS * angle.sin())
}

fn label(labels: Option<&[String]>, i: usize) -> String {
    labels.and_then(|l| l.get(i).cloned()).unwrap_or_else(|| i.to_string())
}

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Draws one polygon with the given diagonals into a frame centred at
/// `(cx, cy)`. `highlight` is drawn thicker in the lower colour.
fn polygon_group(
    s: &mut String,
    class: &str,
    t: &PolygonTriangulation,
    cx: f64,
    cy: f64,
    color: &str,
    highlight: Option<Diagonal>,
    labels: Option<&[String]>,
) {
    let n = t.n();
    writeln!(s, "<g class=\"{class}\">").unwrap();
    let pts: Vec<_> = (0..n).map(|i| point(n, i, cx, cy)).collect();
    let outline: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    writeln!(
        s,
        "<polygon class=\"boundary\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        outline.join(" ")
    )
    .unwrap();
    for d in t.diagonals() {
        let ((x1, y1), (x2, y2)) = (pts[d.a()], pts[d.b()]);
        let (stroke, width) = if Some(d) == highlight {
            (LOWER_COLOR, 3.0)
        } else {
            (color, 1.5)
        };
        writeln!(
            s,
            "<line class=\"diagonal\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"{stroke}\" stroke-width=\"{width:.3}\"/>"
        )
        .unwrap();
    }
    for (i, (x, y)) in pts.iter().enumerate() {
        writeln!(s, "<circle class=\"vertex\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3.000\" fill=\"black\"/>").unwrap();
        let (lx, ly) = (cx + (x - cx) * 1.15, cy + (y - cy) * 1.15);
        writeln!(
            s,
            "<text x=\"{lx:.3}\" y=\"{ly:.3}\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
            label(labels, i)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
}

pub fn render_polygon(t: &PolygonTriangulation, labels: Option<&[String]>) -> String {
    let mut s = header(FRAME, FRAME);
    polygon_group(&mut s, "polygon", t, FRAME / 2.0, FRAME / 2.0, UPPER_COLOR, None, labels);
    s.push_str("</svg>\n");
    s
}

/// One frame per state along the path; each frame after the first
/// highlights the diagonal just inserted.
pub fn render_path(p: &FlipPath, labels: Option<&[String]>) -> String {
    let states = p.states();
    let cols = states.len().clamp(1, COLUMNS);
    let rows = states.len().div_ceil(cols);
    let mut s = header(FRAME * cols as f64, FRAME * rows as f64);
    for (k, t) in states.iter().enumerate() {
        let (col, row) = (k % cols, k / cols);
        let (cx, cy) = (FRAME * (col as f64 + 0.5), FRAME * (row as f64 + 0.5));
        let highlight = k.checked_sub(1).map(|i| p.steps()[i].inserted);
        polygon_group(&mut s, "frame", t, cx, cy, UPPER_COLOR, highlight, labels);
        writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\">step {k}</text>",
            cx,
            cy + RADIUS + 28.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// The two halves of a glued sphere side by side, sharing boundary labels:
/// the upper triangulation in blue, the lower one in red.
pub fn render_sphere(upper: &PolygonTriangulation, lower: &PolygonTriangulation, labels: Option<&[String]>) -> String {
    let mut s = header(2.0 * FRAME, FRAME);
    polygon_group(&mut s, "disk upper", upper, FRAME / 2.0, FRAME / 2.0, UPPER_COLOR, None, labels);
    polygon_group(&mut s, "disk lower", lower, 1.5 * FRAME, FRAME / 2.0, LOWER_COLOR, None, labels);
    s.push_str("</svg>\n");
    s
}
