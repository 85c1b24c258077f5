//! Horizontal collars of the appended vertical graph. Every horizontal segment that
//! joins two faces of the graph is split at its midpoint; the half touching a side
//! belongs to that side's collar.

use crate::graph::{appended_graph, GraphError, VerticalGraph};
use crate::ribbon::End;
use crate::trace::{Axis, Obstacles, PathSegment, Stop, Tracer};
use flat_kernel::rational::{q, qi, zero};
use flat_kernel::{EdgeRef, FlatSurface, Vec2, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Longest horizontal excursion followed before a collar is declared unbounded.
pub const COLLAR_TRACE_LIMIT: i64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CollarError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("collars cover area {covered}, more than the surface area {area}")]
    CollarOverlap { covered: String, area: String },
    #[error("collars cover area {covered}, less than the surface area {area}")]
    CollarGap { covered: String, area: String },
    #[error("a horizontal leaf leaves side {0} and meets no graph face")]
    Unbounded(usize),
}

/// The rectangle swept by horizontal segments leaving a stretch `y0..y1` of one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollarRect {
    pub side: usize,
    pub far_side: usize,
    pub poly: usize,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub x: Q,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub y0: Q,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub y1: Q,
    /// `+1` when the collar extends to the right of the face, `−1` to the left.
    pub normal: i8,
    /// Full horizontal distance to the face on the other end.
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub width: Q,
}

impl CollarRect {
    pub fn height(&self) -> Q {
        &self.y1 - &self.y0
    }

    /// Area of the half belonging to `side`.
    pub fn collar_area(&self) -> Q {
        &self.height() * &self.width / qi(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonalPiece {
    pub component: usize,
    pub sides: Vec<usize>,
    pub cycle_sides: Vec<bool>,
    /// Width of the largest uniform collar along each side (half the narrowest gap).
    #[serde(with = "flat_kernel::rational::serde_q_vec")]
    pub collar_widths: Vec<Q>,
    pub rects: Vec<CollarRect>,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub area: Q,
}

#[derive(Clone, Debug)]
struct Face {
    side: usize,
    id: usize,
    poly: usize,
    x: Q,
    lo: Q,
    hi: Q,
    normal: Vec2,
}

/// Representation of a segment that lies along polygon edge `k`, if any.
fn along_edge(s: &FlatSurface, seg: &PathSegment) -> Option<usize> {
    let p = s.polygon(seg.poly);
    (0..p.len()).find(|&k| {
        let a = p.edge_start(k);
        let v = p.edge_vector(k);
        let on = |z: &Vec2| {
            let rel = z - a;
            let t = rel.dot(&v) / v.dot(&v);
            v.cross(&rel).is_zero() && !t.is_negative() && t <= q(1, 1)
        };
        on(&seg.start) && on(&seg.end)
    })
}

fn partner_image(s: &FlatSurface, seg: &PathSegment, k: usize) -> PathSegment {
    let link = s.link(EdgeRef::new(seg.poly, k));
    PathSegment { poly: link.to.poly, start: link.map.apply(&seg.start), end: link.map.apply(&seg.end) }
}

pub fn polygonal_decomposition(s: &FlatSurface, l: &Q) -> Result<Vec<PolygonalPiece>, CollarError> {
    let g = appended_graph(s, l)?;
    decomposition_of(s, &g)
}

pub fn decomposition_of(s: &FlatSurface, g: &VerticalGraph) -> Result<Vec<PolygonalPiece>, CollarError> {
    let ribbon = g.ribbon();
    let sides = ribbon.sides();
    let ncon = g.connections.len();
    let forward = |edge: usize| -> &Vec<PathSegment> {
        if edge < ncon {
            &g.connections[edge].path
        } else {
            &g.feelers[edge - ncon].path
        }
    };
    // Obstacle ids: one per forward path segment.
    let mut seg_id = Vec::new();
    let mut next_id = 0;
    let mut obstacles = Obstacles { per_poly: vec![Vec::new(); s.polygons().len()] };
    for edge in 0..ribbon.edges.len() {
        let ids: Vec<usize> = (0..forward(edge).len()).map(|i| next_id + i).collect();
        for (seg, &id) in forward(edge).iter().zip(&ids) {
            obstacles.per_poly[seg.poly].push((id, seg.start.clone(), seg.end.clone()));
            if let Some(k) = along_edge(s, seg) {
                let img = partner_image(s, seg, k);
                obstacles.per_poly[img.poly].push((id, img.start, img.end));
            }
        }
        next_id += ids.len();
        seg_id.push(ids);
    }
    // Faces: each traversed segment with the collar on its right.
    let mut faces = Vec::new();
    for (si, side) in sides.iter().enumerate() {
        for h in &side.half_edges {
            let path = forward(h.edge);
            let order: Vec<usize> = match h.end {
                End::A => (0..path.len()).collect(),
                End::B => (0..path.len()).rev().collect(),
            };
            for i in order {
                let seg = if h.end == End::A { path[i].clone() } else { path[i].reversed() };
                let mut normal = seg.direction().quarter_cw();
                let mut seg = seg;
                if let Some(k) = along_edge(s, &seg) {
                    let ev = s.polygon(seg.poly).edge_vector(k);
                    if ev.cross(&normal).is_negative() {
                        let link = s.link(EdgeRef::new(seg.poly, k));
                        normal = link.map.apply_vec(&normal);
                        seg = partner_image(s, &seg, k);
                    }
                }
                let (lo, hi) = if seg.start.y <= seg.end.y {
                    (seg.start.y.clone(), seg.end.y.clone())
                } else {
                    (seg.end.y.clone(), seg.start.y.clone())
                };
                faces.push(Face { side: si, id: seg_id[h.edge][i], poly: seg.poly, x: seg.start.x.clone(), lo, hi, normal });
            }
        }
    }
    let find_face = |id: usize, poly: usize, dir: &Vec2| -> Option<usize> {
        let want = -dir;
        faces.iter().position(|f| f.id == id && f.poly == poly && f.normal == want)
    };
    let tracer = Tracer::new(s, Axis::Horizontal);
    let vertex_classes: Vec<usize> = g.vertices.iter().map(|v| v.class).collect();
    let stop = |c: usize| vertex_classes.contains(&c);
    let limit = qi(COLLAR_TRACE_LIMIT);
    let mut breaks: Vec<Vec<Q>> = faces.iter().map(|f| vec![f.lo.clone(), f.hi.clone()]).collect();
    let mut record = |tr: &crate::trace::Trace, from_side: usize| -> Result<(), CollarError> {
        match &tr.stop {
            Stop::Obstacle { id, poly, point, dir } => {
                if let Some(fi) = find_face(*id, *poly, dir) {
                    breaks[fi].push(point.y.clone());
                }
                Ok(())
            }
            Stop::Vertex { .. } => Ok(()),
            Stop::Exhausted { .. } => Err(CollarError::Unbounded(from_side)),
        }
    };
    // Horizontal separatrices from graph vertices and from feeler tips cut the faces
    // into stretches of constant return distance.
    for v in &g.vertices {
        for site in tracer.sites(v.class) {
            let tr = tracer.from_site(site, &limit, &stop, Some(&obstacles));
            record(&tr, usize::MAX)?;
        }
    }
    for f in &g.feelers {
        if let Some(last) = f.path.last() {
            for x in [qi(1), qi(-1)] {
                let d = Vec2::new(x, zero());
                let tr = tracer.from_point(last.poly, &last.end, &d, &limit, &stop, Some(&obstacles));
                record(&tr, usize::MAX)?;
            }
        }
    }
    let mut rects = Vec::new();
    for (fi, face) in faces.iter().enumerate() {
        let mut ys: Vec<Q> = breaks[fi].iter().filter(|y| **y >= face.lo && **y <= face.hi).cloned().collect();
        ys.sort();
        ys.dedup();
        for w in ys.windows(2) {
            let mid = (&w[0] + &w[1]) / qi(2);
            let z = Vec2::new(face.x.clone(), mid);
            let tr = tracer.from_point(face.poly, &z, &face.normal, &limit, &stop, Some(&obstacles));
            let far = match &tr.stop {
                Stop::Obstacle { id, poly, dir, .. } => find_face(*id, *poly, dir).map(|f| faces[f].side),
                _ => None,
            }
            .ok_or(CollarError::Unbounded(face.side))?;
            rects.push(CollarRect {
                side: face.side,
                far_side: far,
                poly: face.poly,
                x: face.x.clone(),
                y0: w[0].clone(),
                y1: w[1].clone(),
                normal: if face.normal.x.is_positive() { 1 } else { -1 },
                width: tr.length,
            });
        }
    }
    let covered = rects.iter().fold(zero(), |a, r| a + r.collar_area());
    let area = s.area();
    if covered > area {
        return Err(CollarError::CollarOverlap { covered: flat_kernel::format_q(&covered), area: flat_kernel::format_q(&area) });
    }
    if covered < area {
        return Err(CollarError::CollarGap { covered: flat_kernel::format_q(&covered), area: flat_kernel::format_q(&area) });
    }
    let comps = ribbon.components();
    let side_component: Vec<usize> = sides
        .iter()
        .map(|sd| {
            let v = ribbon.vertex_of_walk(&sd.half_edges).expect("a side has an endpoint");
            comps[v]
        })
        .collect();
    let mut pieces = Vec::new();
    for c in 0..ribbon.component_count() {
        let side_ids: Vec<usize> = (0..sides.len()).filter(|&i| side_component[i] == c).collect();
        if side_ids.is_empty() {
            continue;
        }
        let piece_rects: Vec<CollarRect> = rects.iter().filter(|r| side_component[r.side] == c).cloned().collect();
        let collar_widths = side_ids
            .iter()
            .map(|&si| {
                piece_rects
                    .iter()
                    .filter(|r| r.side == si)
                    .map(|r| &r.width / qi(2))
                    .min()
                    .unwrap_or_else(zero)
            })
            .collect();
        pieces.push(PolygonalPiece {
            component: c,
            cycle_sides: side_ids.iter().map(|&i| sides[i].is_cycle).collect(),
            sides: side_ids,
            collar_widths,
            area: piece_rects.iter().fold(zero(), |a, r| a + r.collar_area()),
            rects: piece_rects,
        });
    }
    Ok(pieces)
}
