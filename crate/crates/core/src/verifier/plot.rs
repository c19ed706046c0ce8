//! Filled contour pictures of piecewise-linear functions with their zero set.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::fem::FEFunction;
use crate::mesh::Mesh;

/// A nodal function together with the mesh it lives on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeField {
    pub label: String,
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<[usize; 3]>,
    pub values: Vec<f64>,
}

impl ModeField {
    pub fn new(label: impl Into<String>, mesh: &Mesh, u: &FEFunction) -> Self {
        Self {
            label: label.into(),
            vertices: mesh.vertices.iter().map(|p| [super::canon(p.x), super::canon(p.y)]).collect(),
            cells: mesh.cells.clone(),
            values: u.values.iter().map(|&v| super::canon(v)).collect(),
        }
    }
}

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 20.0;
/// Bands on each side of zero.
const BANDS: usize = 6;

/// Point in the plane carrying a function value.
#[derive(Clone, Copy)]
struct Node {
    x: f64,
    y: f64,
    f: f64,
}

/// Keeps the part of a convex polygon where `sign * (f - level) >= 0`.
fn clip(poly: &[Node], level: f64, sign: f64) -> Vec<Node> {
    let inside = |n: &Node| sign * (n.f - level) >= 0.0;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if inside(&a) {
            out.push(a);
        }
        if inside(&a) != inside(&b) {
            let t = (level - a.f) / (b.f - a.f);
            out.push(Node {
                x: a.x + t * (b.x - a.x),
                y: a.y + t * (b.y - a.y),
                f: level,
            });
        }
    }
    out
}

fn polygon_area(p: &[Node]) -> f64 {
    0.5 * (0..p.len())
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % p.len()]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Diverging palette: blue for negative, white at zero, red for positive.
fn color(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let (end, s) = if t < 0.0 { ((33.0, 102.0, 172.0), -t) } else { ((178.0, 24.0, 43.0), t) };
    let mix = |c: f64| (255.0 + s * (c - 255.0)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(end.0), mix(end.1), mix(end.2))
}

/// Svg with one filled band polygon per cell and level interval, and the
/// zero level set drawn as dark segments.
pub fn render_svg(mode: &ModeField) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for v in &mode.vertices {
        x0 = x0.min(v[0]);
        x1 = x1.max(v[0]);
        y0 = y0.min(v[1]);
        y1 = y1.max(v[1]);
    }
    let scale = (WIDTH - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let height = (y1 - y0) * scale + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) * scale;
    let py = |y: f64| height - MARGIN - (y - y0) * scale;
    let amp = mode.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", mode.label);
    let levels: Vec<f64> = (0..=2 * BANDS).map(|k| amp * (k as f64 / BANDS as f64 - 1.0)).collect();
    let _ = writeln!(out, r#"<g stroke="none">"#);
    for cell in &mode.cells {
        let tri: Vec<Node> = cell
            .iter()
            .map(|&i| Node {
                x: mode.vertices[i][0],
                y: mode.vertices[i][1],
                f: mode.values[i],
            })
            .collect();
        for band in levels.windows(2) {
            let piece = clip(&clip(&tri, band[0], 1.0), band[1], -1.0);
            if piece.len() < 3 || polygon_area(&piece).abs() * scale * scale < 1e-6 {
                continue;
            }
            let mid = 0.5 * (band[0] + band[1]) / amp;
            let points: Vec<String> = piece.iter().map(|n| format!("{:.2},{:.2}", px(n.x), py(n.y))).collect();
            // thin stroke in the fill colour hides antialiasing seams
            let c = color(mid);
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{c}" stroke="{c}" stroke-width="0.4"/>"#,
                points.join(" ")
            );
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g stroke="#111111" stroke-width="2" fill="none">"##);
    for cell in &mode.cells {
        let mut crossing = Vec::new();
        for k in 0..3 {
            let (a, b) = (cell[k], cell[(k + 1) % 3]);
            let (fa, fb) = (mode.values[a], mode.values[b]);
            if (fa < 0.0) != (fb < 0.0) {
                let t = fa / (fa - fb);
                let (va, vb) = (mode.vertices[a], mode.vertices[b]);
                crossing.push((va[0] + t * (vb[0] - va[0]), va[1] + t * (vb[1] - va[1])));
            }
        }
        if let [p, q] = crossing[..] {
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                px(p.0),
                py(p.1),
                px(q.0),
                py(q.1)
            );
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
