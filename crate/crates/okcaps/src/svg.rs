//! Deterministic SVG output: polygons with labelled vertices and sampled curves.

use crate::exactgeom::{rat_str, to_f64, Pt};
use std::fmt::Write;

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

fn header(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n{body}</svg>\n",
        s = SIZE
    )
}

/// Maps data coordinates into the canvas with y pointing up and equal axis scales.
struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn fit(pts: &[(f64, f64)]) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (0f64, 0f64, 0f64, 0f64);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        Frame {
            x0,
            y0,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) * self.scale,
            SIZE - MARGIN - (y - self.y0) * self.scale,
        )
    }
}

/// A filled polygon; each vertex gets a dot and its exact coordinates.
pub fn polygon_svg(vertices: &[Pt]) -> String {
    if vertices.is_empty() {
        return header("");
    }
    let f64s: Vec<(f64, f64)> = vertices
        .iter()
        .map(|p| (to_f64(&p.x), to_f64(&p.y)))
        .collect();
    let frame = Frame::fit(&f64s);
    let mut body = String::new();
    let pts: Vec<String> = f64s
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    writeln!(
        body,
        "<polygon points=\"{}\" fill=\"#cfe0f3\" stroke=\"#1f4e79\" stroke-width=\"2\"/>",
        pts.join(" ")
    )
    .unwrap();
    for (p, &q) in vertices.iter().zip(&f64s) {
        let (x, y) = frame.map(q);
        writeln!(
            body,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"#1f4e79\"/>"
        )
        .unwrap();
        writeln!(
            body,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" font-family=\"monospace\">({},{})</text>",
            x + 5.0,
            y - 5.0,
            rat_str(&p.x),
            rat_str(&p.y)
        )
        .unwrap();
    }
    header(&body)
}

/// A polyline through sampled points, e.g. an ellipsoid embedding function bound.
pub fn polyline_svg(samples: &[(f64, f64)]) -> String {
    if samples.is_empty() {
        return header("");
    }
    let frame = Frame::fit(samples);
    let pts: Vec<String> = samples
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let mut body = String::new();
    let (ox, oy) = frame.map((frame.x0, frame.y0));
    writeln!(
        body,
        "<line x1=\"{ox:.3}\" y1=\"{oy:.3}\" x2=\"{:.3}\" y2=\"{oy:.3}\" stroke=\"#888\"/>",
        SIZE - MARGIN
    )
    .unwrap();
    writeln!(
        body,
        "<line x1=\"{ox:.3}\" y1=\"{oy:.3}\" x2=\"{ox:.3}\" y2=\"{MARGIN:.3}\" stroke=\"#888\"/>"
    )
    .unwrap();
    writeln!(
        body,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\"/>",
        pts.join(" ")
    )
    .unwrap();
    header(&body)
}
