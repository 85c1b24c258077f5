//! Deterministic SVG drawings of surfaces, vertical graphs and truncated ends.
//! Element ids are fixed by index and numbers are printed with three decimals.

use flat_kernel::rational::to_f64;
use flat_kernel::{FlatSurface, Sign};
use half_plane::{Truncation, TruncationBoundary};
use std::f64::consts::TAU;
use std::fmt::Write;
use thiserror::Error;
use vertical_graph::VerticalGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("cannot render: {0}")]
    Unrenderable(String),
}

const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

fn n(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

struct Doc {
    body: String,
    width: f64,
    height: f64,
}

impl Doc {
    fn new(width: f64, height: f64) -> Self {
        Doc { body: String::new(), width, height }
    }

    fn finish(self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = n(self.width),
            h = n(self.height)
        )
        .unwrap();
        out.push_str(
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }

    fn line(&mut self, id: &str, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64, arrow: bool) {
        let marker = if arrow { " marker-end=\"url(#arrow)\"" } else { "" };
        writeln!(
            self.body,
            "<line id=\"{id}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\"{marker}/>",
            n(a.0),
            n(a.1),
            n(b.0),
            n(b.1),
            n(width)
        )
        .unwrap();
    }

    fn text(&mut self, id: &str, at: (f64, f64), s: &str) {
        writeln!(
            self.body,
            "<text id=\"{id}\" x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            n(at.0),
            n(at.1),
            escape(s)
        )
        .unwrap();
    }

    fn polygon(&mut self, id: &str, pts: &[(f64, f64)], fill: &str) {
        let p: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", n(*x), n(*y))).collect();
        writeln!(self.body, "<polygon id=\"{id}\" points=\"{}\" fill=\"{fill}\" stroke=\"none\"/>", p.join(" ")).unwrap();
    }

    fn circle(&mut self, id: &str, c: (f64, f64), r: f64, fill: &str) {
        writeln!(
            self.body,
            "<circle id=\"{id}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\" stroke=\"#000\"/>",
            n(c.0),
            n(c.1),
            n(r)
        )
        .unwrap();
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn finite(pts: &[(f64, f64)]) -> Result<(), RenderError> {
    if pts.iter().all(|(x, y)| x.is_finite() && y.is_finite()) {
        Ok(())
    } else {
        Err(RenderError::Unrenderable("non-finite coordinates".into()))
    }
}

/// Polygons side by side, each edge colored by its gluing. Translation gluings carry
/// an arrow along both edges; rotation gluings are dashed.
pub fn render_surface(s: &FlatSurface) -> Result<String, RenderError> {
    let polys: Vec<Vec<(f64, f64)>> =
        s.polygons().iter().map(|p| p.vertices.iter().map(|v| (to_f64(&v.x), to_f64(&v.y))).collect()).collect();
    finite(&polys.concat())?;
    let bbox = |p: &[(f64, f64)]| {
        p.iter().fold((f64::MAX, f64::MAX, f64::MIN, f64::MIN), |(a, b, c, d), &(x, y)| (a.min(x), b.min(y), c.max(x), d.max(y)))
    };
    let boxes: Vec<_> = polys.iter().map(|p| bbox(p)).collect();
    let gap = boxes.iter().map(|b| (b.2 - b.0).max(b.3 - b.1)).fold(0.0, f64::max) * 0.15;
    let total_w: f64 = boxes.iter().map(|b| b.2 - b.0).sum::<f64>() + gap * (boxes.len() - 1) as f64;
    let total_h = boxes.iter().map(|b| b.3 - b.1).fold(0.0, f64::max);
    if !(total_w > 0.0 && total_h > 0.0) {
        return Err(RenderError::Unrenderable("surface has no extent".into()));
    }
    let scale = SIZE / total_w.max(total_h);
    let mut doc = Doc::new(total_w * scale + 2.0 * MARGIN, total_h * scale + 2.0 * MARGIN);
    let mut placed = Vec::with_capacity(polys.len());
    let mut x_at = 0.0;
    for (p, b) in polys.iter().zip(&boxes) {
        let shift = x_at - b.0;
        let pts: Vec<(f64, f64)> =
            p.iter().map(|(x, y)| (MARGIN + (x + shift) * scale, MARGIN + (total_h - (y - b.1)) * scale)).collect();
        placed.push(pts);
        x_at += b.2 - b.0 + gap;
    }
    for (i, pts) in placed.iter().enumerate() {
        doc.polygon(&format!("poly-{i}"), pts, "#eef3fb");
    }
    for (k, g) in s.gluings().iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for (end, e) in [("a", g.a), ("b", g.b)] {
            let pts = &placed[e.poly];
            let a = pts[e.edge];
            let b = pts[(e.edge + 1) % pts.len()];
            let id = format!("glue-{k}{end}");
            match g.sign {
                Sign::Plus => doc.line(&id, a, b, color, 2.0, true),
                Sign::Minus => {
                    writeln!(
                        doc.body,
                        "<line id=\"{id}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2.000\" stroke-dasharray=\"6 3\"/>",
                        n(a.0),
                        n(a.1),
                        n(b.0),
                        n(b.1)
                    )
                    .unwrap();
                }
            }
            // Label on the inner side of the edge (polygons are counterclockwise, y is flipped).
            let (mx, my) = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = (dx * dx + dy * dy).sqrt().max(1e-9);
            doc.text(&format!("label-{k}{end}"), (mx + 12.0 * dy / len, my - 12.0 * dx / len + 4.0), &format!("g{k}"));
        }
    }
    Ok(doc.finish())
}

/// Graph vertices on a circle with their prongs as short ticks; connections join tick
/// ends through the middle, feelers point outward.
pub fn render_graph(g: &VerticalGraph) -> Result<String, RenderError> {
    if g.vertices.is_empty() {
        return Err(RenderError::Unrenderable("graph has no vertices".into()));
    }
    let c = SIZE / 2.0 + MARGIN;
    let ring = if g.vertices.len() == 1 { 0.0 } else { SIZE * 0.28 };
    let centers: Vec<(f64, f64)> = (0..g.vertices.len())
        .map(|i| {
            let a = TAU * i as f64 / g.vertices.len() as f64;
            (c + ring * a.cos(), c + ring * a.sin())
        })
        .collect();
    let tick = 22.0;
    let prong_end = |v: usize, k: usize, r: f64| {
        let a = TAU * k as f64 / g.vertices[v].prongs.len() as f64 - TAU / 4.0;
        (centers[v].0 + r * a.cos(), centers[v].1 + r * a.sin())
    };
    let mut doc = Doc::new(SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    for (i, v) in g.vertices.iter().enumerate() {
        for k in 0..v.prongs.len() {
            doc.line(&format!("prong-{i}-{k}"), centers[i], prong_end(i, k, tick), "#999", 1.0, false);
        }
    }
    for (k, s) in g.connections.iter().enumerate() {
        let a = prong_end(s.from.vertex, s.from.index, tick);
        let b = prong_end(s.to.vertex, s.to.index, tick);
        let bend = (a.0 + b.0 + 2.0 * c) / 4.0 + 30.0 * ((k % 3) as f64 - 1.0);
        let bend_y = (a.1 + b.1 + 2.0 * c) / 4.0 + 30.0 * ((k % 3) as f64 - 1.0);
        writeln!(
            doc.body,
            "<path id=\"conn-{k}\" d=\"M{},{} Q{},{} {},{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2.000\"/>",
            n(a.0),
            n(a.1),
            n(bend),
            n(bend_y),
            n(b.0),
            n(b.1),
            PALETTE[k % PALETTE.len()]
        )
        .unwrap();
        let mid = ((a.0 + 2.0 * bend + b.0) / 4.0, (a.1 + 2.0 * bend_y + b.1) / 4.0);
        doc.text(&format!("conn-label-{k}"), mid, &flat_kernel::format_q(&s.length));
    }
    for (k, f) in g.feelers.iter().enumerate() {
        let a = prong_end(f.prong.vertex, f.prong.index, tick);
        let b = prong_end(f.prong.vertex, f.prong.index, tick + 40.0);
        doc.line(&format!("feeler-{k}"), a, b, "#444", 1.5, true);
    }
    for (i, v) in g.vertices.iter().enumerate() {
        doc.circle(&format!("vertex-{i}"), centers[i], 6.0, if v.label.is_some() { "#fff" } else { "#000" });
        let label = v.label.clone().unwrap_or_else(|| format!("{}π", v.angle_pi));
        doc.text(&format!("vertex-label-{i}"), (centers[i].0 + 14.0, centers[i].1 - 10.0), &label);
    }
    Ok(doc.finish())
}

/// Rectangles of the truncation arranged around a star with one arm per side, or the
/// annulus of a cylinder end.
pub fn render_truncation(t: &Truncation) -> Result<String, RenderError> {
    let c = SIZE / 2.0 + MARGIN;
    let mut doc = Doc::new(SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    match &t.boundary {
        TruncationBoundary::Closed { circumference, annulus_width } => {
            let (circ, w) = (to_f64(circumference), to_f64(annulus_width));
            if !(circ > 0.0 && w > 0.0) {
                return Err(RenderError::Unrenderable("degenerate annulus".into()));
            }
            let r0 = SIZE * 0.18;
            let r1 = r0 + SIZE * 0.25 * (w / (w + circ / TAU)).max(0.1);
            writeln!(
                doc.body,
                "<path id=\"annulus\" d=\"M{a},{c} A{r1},{r1} 0 1 0 {b},{c} A{r1},{r1} 0 1 0 {a},{c} M{d},{c} A{r0},{r0} 0 1 1 {e},{c} A{r0},{r0} 0 1 1 {d},{c}\" fill=\"#eef3fb\" fill-rule=\"evenodd\" stroke=\"#000\"/>",
                a = n(c - r1),
                b = n(c + r1),
                d = n(c - r0),
                e = n(c + r0),
                c = n(c),
                r0 = n(r0),
                r1 = n(r1)
            )
            .unwrap();
            doc.text("circumference", (c, c + 4.0), &flat_kernel::format_q(circumference));
        }
        TruncationBoundary::Polygonal { vertical_sides, rectangle_widths } => {
            let k = vertical_sides.len();
            if k == 0 || rectangle_widths.len() != k {
                return Err(RenderError::Unrenderable("truncation has no sides".into()));
            }
            let lengths: Vec<f64> = vertical_sides.iter().map(to_f64).collect();
            let widths: Vec<f64> = rectangle_widths.iter().map(to_f64).collect();
            let longest = lengths.iter().chain(&widths).cloned().fold(0.0, f64::max);
            if !(longest > 0.0 && longest.is_finite()) {
                return Err(RenderError::Unrenderable("truncation has no extent".into()));
            }
            let scale = SIZE * 0.22 / longest;
            let hub = SIZE * 0.08;
            for j in 0..k {
                // Rectangle j sits across the arm at angle a_j: its inner side faces the hub.
                let a = TAU * j as f64 / k as f64 - TAU / 4.0;
                let (u, v) = ((a.cos(), a.sin()), (-a.sin(), a.cos()));
                let half = lengths[j] * scale / 2.0;
                let (r0, r1) = (hub, hub + widths[j] * scale);
                let at = |r: f64, s: f64| (c + r * u.0 + s * v.0, c + r * u.1 + s * v.1);
                doc.polygon(&format!("rect-{j}"), &[at(r0, -half), at(r1, -half), at(r1, half), at(r0, half)], "#eef3fb");
                doc.line(&format!("outer-side-{j}"), at(r1, -half), at(r1, half), PALETTE[j % PALETTE.len()], 2.0, false);
                doc.line(&format!("arm-{j}"), (c, c), at(r1 + 30.0, 0.0), "#000", 1.5, true);
                doc.text(&format!("side-label-{j}"), at(r1 + 44.0, 0.0), &flat_kernel::format_q(&vertical_sides[j]));
            }
        }
    }
    doc.text("caption", (c, SIZE + 2.0 * MARGIN - 8.0), &format!("end {} truncated at H = {}", t.end, flat_kernel::format_q(&t.height)));
    Ok(doc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use flat_kernel::catalog::square_torus;

    #[test]
    fn square_torus_is_one_square_with_two_arrow_pairs() {
        let svg = render_surface(&square_torus()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("marker-end").count(), 4);
        assert_eq!(svg, render_surface(&square_torus()).unwrap());
    }

    #[test]
    fn numbers_have_fixed_precision() {
        assert_eq!(n(1.0), "1.000");
        assert_eq!(n(-0.0001), "0.000");
    }
}
