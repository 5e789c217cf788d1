//! Single-file SVG rendering of polygon orbits.
//!
//! Fixed 1000×1000 viewBox, autoscaled to the bounding box of every
//! rendered step in the affine chart `w = 1`; each step draws the closed
//! vertex polyline plus vertex dots, with opacity ramping up along the
//! orbit. Complex vertices are rendered by their real parts and flagged.

use crate::polygon::VertexChain;

const VIEW: f64 = 1000.0;
const MARGIN: f64 = 40.0;

/// Rendered orbit plus a flag set when any vertex had a non-negligible
/// imaginary part (the plot then shows real parts only).
pub struct OrbitSvg {
    pub svg: String,
    pub complex_flagged: bool,
}

/// Renders every `stride`-th step of the orbit.
pub fn orbit_svg(orbit: &[VertexChain], stride: usize) -> OrbitSvg {
    let stride = stride.max(1);
    let steps: Vec<&VertexChain> = orbit.iter().step_by(stride).collect();
    let mut complex_flagged = false;
    // affine chart and bounding box over all rendered steps
    let mut charts: Vec<Vec<(f64, f64)>> = Vec::new();
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for chain in &steps {
        let mut pts = Vec::with_capacity(chain.n());
        for p in chain.vertices() {
            let w = p.h[2];
            let (ax, ay) = if w.norm() > 0.0 {
                (p.h[0] / w, p.h[1] / w)
            } else {
                (p.h[0], p.h[1]) // vertex on the line at infinity
            };
            if ax.im.abs() > 1e-9 * (1.0 + ax.re.abs()) || ay.im.abs() > 1e-9 * (1.0 + ay.re.abs()) {
                complex_flagged = true;
            }
            let (px, py) = (ax.re, ay.re);
            xmin = xmin.min(px);
            xmax = xmax.max(px);
            ymin = ymin.min(py);
            ymax = ymax.max(py);
            pts.push((px, py));
        }
        charts.push(pts);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(1e-12);
    let scale = (VIEW - 2.0 * MARGIN) / span;
    let cx = (xmin + xmax) / 2.0;
    let cy = (ymin + ymax) / 2.0;
    let map = |(px, py): (f64, f64)| -> (f64, f64) {
        (
            VIEW / 2.0 + (px - cx) * scale,
            VIEW / 2.0 - (py - cy) * scale, // flip: SVG y grows downward
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {VIEW} {VIEW}\">\n\
         <rect width=\"{VIEW}\" height=\"{VIEW}\" fill=\"white\"/>\n"
    ));
    let total = charts.len().max(1);
    for (idx, pts) in charts.iter().enumerate() {
        let opacity = 0.15 + 0.85 * (idx as f64 + 1.0) / total as f64;
        let mut path = String::new();
        for (k, &pt) in pts.iter().enumerate() {
            let (mx, my) = map(pt);
            path.push_str(&format!("{}{mx:.3},{my:.3}", if k == 0 { "" } else { " " }));
        }
        // close the polygon
        if let Some(&first) = pts.first() {
            let (mx, my) = map(first);
            path.push_str(&format!(" {mx:.3},{my:.3}"));
        }
        svg.push_str(&format!(
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\" opacity=\"{opacity:.3}\"/>\n"
        ));
        for &pt in pts {
            let (mx, my) = map(pt);
            svg.push_str(&format!(
                "<circle cx=\"{mx:.3}\" cy=\"{my:.3}\" r=\"4\" fill=\"#c0392b\" opacity=\"{opacity:.3}\"/>\n"
            ));
        }
    }
    svg.push_str("</svg>\n");
    OrbitSvg { svg, complex_flagged }
}
