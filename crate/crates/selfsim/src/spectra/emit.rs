//! Deterministic text emitters for spectral data: CSV tables and a small
//! self-contained SVG scatter plot.

use super::slice::SpectralSlice;
use super::sweep::SigmaCloud;
use std::fmt::Write as _;

/// Fixed SVG viewport width in pixels.
const SVG_WIDTH: f64 = 800.0;
/// Fixed SVG viewport height in pixels.
const SVG_HEIGHT: f64 = 600.0;
/// Margin around the data box in pixels.
const SVG_MARGIN: f64 = 40.0;

fn fmt(v: f64) -> String {
    // Shortest round-trip formatting keeps files byte-stable across runs.
    format!("{v}")
}

/// CSV for one spectral slice: fixed parameters repeated per row, then the
/// eigenvalue column.
pub fn slice_csv(slice: &SpectralSlice) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# pencil {} level {} spectral {}",
        slice.pencil(),
        slice.level(),
        slice.spectral()
    );
    let mut header: Vec<String> = slice.fixed().iter().map(|(n, _)| n.clone()).collect();
    header.push("eigenvalue".to_string());
    let _ = writeln!(out, "{}", header.join(","));
    for eig in slice.eigenvalues() {
        let mut row: Vec<String> = slice.fixed().iter().map(|(_, v)| fmt(*v)).collect();
        row.push(fmt(*eig));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// CSV for a singular-set cloud: non-spectral parameters in pencil order,
/// then the eigenvalue (spectral coordinate) column.
pub fn cloud_csv(cloud: &SigmaCloud) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# pencil {} level {} spectral {}",
        cloud.pencil(),
        cloud.level(),
        cloud.params()[cloud.spectral_index()]
    );
    let mut header: Vec<String> = cloud
        .params()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != cloud.spectral_index())
        .map(|(_, n)| n.clone())
        .collect();
    header.push("eigenvalue".to_string());
    let _ = writeln!(out, "{}", header.join(","));
    for point in cloud.points() {
        let mut row: Vec<String> = point
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != cloud.spectral_index())
            .map(|(_, v)| fmt(*v))
            .collect();
        row.push(fmt(point[cloud.spectral_index()]));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// CSV for a generic point list (attractor clouds and the like): plain
/// coordinate columns under the given names.
pub fn points_csv(names: &[String], points: &[Vec<f64>], comment: &str) -> String {
    let mut out = String::new();
    if !comment.is_empty() {
        let _ = writeln!(out, "# {comment}");
    }
    let _ = writeln!(out, "{}", names.join(","));
    for point in points {
        let row: Vec<String> = point.iter().map(|v| fmt(*v)).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Self-contained SVG scatter of two coordinates of a point list, fixed
/// 800x600 viewport, points only.
pub fn scatter_svg(points: &[Vec<f64>], x_index: usize, y_index: usize, title: &str) -> String {
    let xs: Vec<f64> = points.iter().map(|p| p[x_index]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[y_index]).collect();
    let (x_min, x_max) = bounds(&xs);
    let (y_min, y_max) = bounds(&ys);
    let sx = (SVG_WIDTH - 2.0 * SVG_MARGIN) / span(x_min, x_max);
    let sy = (SVG_HEIGHT - 2.0 * SVG_MARGIN) / span(y_min, y_max);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<title>{}</title><rect width="100%" height="100%" fill="white"/>"#,
        title.replace('<', "&lt;").replace('>', "&gt;")
    );
    for p in points {
        let cx = SVG_MARGIN + (p[x_index] - x_min) * sx;
        let cy = SVG_HEIGHT - SVG_MARGIN - (p[y_index] - y_min) * sy;
        let _ = writeln!(
            out,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="1.2" fill="black"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min.is_finite() && max.is_finite() {
        (min, max)
    } else {
        (0.0, 1.0)
    }
}

fn span(min: f64, max: f64) -> f64 {
    if max - min > 0.0 {
        max - min
    } else {
        1.0
    }
}
