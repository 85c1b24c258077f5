use crate::end::{normalize_truncation, CrownEnd};
use crate::local::pullback_leading_term;
use crate::HalfPlaneError;
use flat_kernel::rational::{format_q, to_f64, zero};
use flat_kernel::{FlatSurface, Q};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use vertical_graph::{alternating_residue, appended_graph, End, HalfEdge, RibbonGraph, Side, VerticalGraph};

/// What is glued along a side of the spine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Attachment {
    HalfPlane { side: usize },
    HalfCylinder {
        side: usize,
        #[serde(with = "flat_kernel::rational::serde_q")]
        circumference: Q,
    },
}

impl Attachment {
    pub fn side(&self) -> usize {
        match self {
            Attachment::HalfPlane { side } | Attachment::HalfCylinder { side, .. } => *side,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Residue {
    /// Alternating sum of the side lengths of a planar end.
    Planar(#[serde(with = "flat_kernel::rational::serde_q")] Q),
    /// A cylinder end; its residue is `circumference / 2π`.
    Cylinder {
        #[serde(with = "flat_kernel::rational::serde_q")]
        circumference: Q,
    },
}

impl Residue {
    pub fn value(&self) -> f64 {
        match self {
            Residue::Planar(c) => to_f64(c),
            Residue::Cylinder { circumference } => to_f64(circumference) / (2.0 * PI),
        }
    }

    /// The residue itself when it is rational.
    pub fn exact(&self) -> Option<&Q> {
        match self {
            Residue::Planar(c) => Some(c),
            Residue::Cylinder { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndData {
    pub order: u32,
    pub residue: Residue,
    /// Leading coefficient in a supplied chart; absent without one.
    pub leading_term: Option<(f64, f64)>,
}

/// A puncture at infinity: one boundary walk of the spine with the sides on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceEnd {
    pub walk: usize,
    pub sides: Vec<usize>,
    pub data: EndData,
}

impl SurfaceEnd {
    pub fn half_planes(&self) -> usize {
        if self.data.order == 2 {
            0
        } else {
            self.sides.len()
        }
    }
}

/// Half-planes on the non-cycle sides of a ribbon spine and half-infinite cylinders
/// on its cycles. Rays of the spine are infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedHalfPlaneSurface {
    pub spine: RibbonGraph,
    pub sides: Vec<Side>,
    pub attachments: Vec<Attachment>,
    pub ends: Vec<SurfaceEnd>,
}

impl GeneralizedHalfPlaneSurface {
    pub fn half_plane_count(&self) -> usize {
        self.attachments.iter().filter(|a| matches!(a, Attachment::HalfPlane { .. })).count()
    }

    pub fn cylinder_count(&self) -> usize {
        self.attachments.len() - self.half_plane_count()
    }

    pub fn component_count(&self) -> usize {
        self.spine.component_count()
    }

    /// Component of the spine carrying an end.
    pub fn component_of_end(&self, end: usize) -> Option<usize> {
        let walks = self.spine.walks();
        let w = &walks[self.ends.get(end)?.walk];
        self.spine.vertex_of_walk(w).map(|v| self.spine.components()[v])
    }

    /// Ends that break the rule "residue is zero if the order is even" read literally.
    /// Under the odd-count convention used here such ends are legitimate, so this is
    /// a warning list rather than an error.
    pub fn parity_warnings(&self) -> Vec<usize> {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, e)| e.data.order % 2 == 0 && e.data.order != 2 && e.data.residue.value() != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Attaches half-planes and half-cylinders to the sides of `spine` and lists one end
/// per boundary walk.
pub fn build_hps(spine: &RibbonGraph) -> Result<GeneralizedHalfPlaneSurface, HalfPlaneError> {
    let sides = spine.sides();
    let mut attachments = Vec::with_capacity(sides.len());
    for (i, side) in sides.iter().enumerate() {
        if side.half_edges.is_empty() {
            return Err(HalfPlaneError::UnattachableSide(i));
        }
        if side.is_cycle {
            let circumference = spine.side_length(side);
            if !circumference.is_positive() || side.half_edges.iter().any(|h| spine.is_ray(h.edge)) {
                return Err(HalfPlaneError::UnattachableSide(i));
            }
            attachments.push(Attachment::HalfCylinder { side: i, circumference });
        } else {
            attachments.push(Attachment::HalfPlane { side: i });
        }
    }
    let walk_count = spine.walks().len();
    let mut ends = Vec::with_capacity(walk_count);
    for w in 0..walk_count {
        let on_walk: Vec<usize> = (0..sides.len()).filter(|&i| sides[i].walk == w).collect();
        let data = if on_walk.len() == 1 && sides[on_walk[0]].is_cycle {
            EndData {
                order: 2,
                residue: Residue::Cylinder { circumference: spine.side_length(&sides[on_walk[0]]) },
                leading_term: None,
            }
        } else {
            let lengths: Vec<Q> = on_walk.iter().map(|&i| spine.side_length(&sides[i])).collect();
            let order = on_walk.len() as u32 + 2;
            if order < 4 {
                return Err(HalfPlaneError::LowOrderEnd { end: ends.len(), order });
            }
            EndData { order, residue: Residue::Planar(alternating_residue(&lengths)), leading_term: None }
        };
        ends.push(SurfaceEnd { walk: w, sides: on_walk, data });
    }
    Ok(GeneralizedHalfPlaneSurface { spine: spine.clone(), sides, attachments, ends })
}

/// Coordinate near a pole obtained from the model coordinate, in which the leading
/// coefficient is 1, by a conformal map with the given `|f′(0)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelChart {
    pub derivative: f64,
}

/// Order and residue of an end, with the leading coefficient when a chart is given.
/// At a cylinder end the coefficient is `C²` in every chart.
pub fn end_local_data(
    s: &GeneralizedHalfPlaneSurface,
    end: usize,
    chart: Option<ModelChart>,
) -> Result<EndData, HalfPlaneError> {
    let e = s.ends.get(end).ok_or(HalfPlaneError::NoSuchEnd(end))?;
    let mut data = e.data.clone();
    if let Some(ch) = chart {
        let z = if data.order == 2 {
            let c = data.residue.value();
            Complex64::new(c * c, 0.0)
        } else {
            pullback_leading_term(Complex64::new(1.0, 0.0), data.order, ch.derivative)?
        };
        data.leading_term = Some((z.re, z.im));
    }
    Ok(data)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruncationBoundary {
    /// Rectangles of width `H/2` on each side; outer vertical sides in side order.
    Polygonal {
        #[serde(with = "flat_kernel::rational::serde_q_vec")]
        vertical_sides: Vec<Q>,
        #[serde(with = "flat_kernel::rational::serde_q_vec")]
        rectangle_widths: Vec<Q>,
    },
    /// An annulus of width `H/2` on a cylinder end.
    Closed {
        #[serde(with = "flat_kernel::rational::serde_q")]
        circumference: Q,
        #[serde(with = "flat_kernel::rational::serde_q")]
        annulus_width: Q,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub end: usize,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub height: Q,
    pub boundary: TruncationBoundary,
    /// The part of the end beyond the truncation is a single punctured disc.
    pub complement_is_punctured_disk: bool,
}

/// Truncation of an end at height `H`.
pub fn truncate(s: &GeneralizedHalfPlaneSurface, end: usize, h: &Q) -> Result<Truncation, HalfPlaneError> {
    let e = s.ends.get(end).ok_or(HalfPlaneError::NoSuchEnd(end))?;
    if !h.is_positive() {
        return Err(HalfPlaneError::HTooSmall { height: format_q(h) });
    }
    let half = h / Q::from_integer(2.into());
    let boundary = match &e.data.residue {
        Residue::Cylinder { circumference } => {
            TruncationBoundary::Closed { circumference: circumference.clone(), annulus_width: half }
        }
        Residue::Planar(_) => {
            let lengths: Vec<Q> = e.sides.iter().map(|&i| s.spine.side_length(&s.sides[i])).collect();
            let vertical_sides = normalize_truncation(&CrownEnd::from_side_lengths(&lengths)?, h)?;
            TruncationBoundary::Polygonal { rectangle_widths: vec![half; vertical_sides.len()], vertical_sides }
        }
    };
    Ok(Truncation {
        end,
        height: h.clone(),
        boundary,
        complement_is_punctured_disk: outer_boundary_is_one_circle(s, e),
    })
}

/// The outer boundary of the truncated end runs along the end's sides in walk order,
/// turning from one rectangle to the next at each tip. It is a single closed curve
/// exactly when following tips visits every side of the end once before closing.
fn outer_boundary_is_one_circle(s: &GeneralizedHalfPlaneSurface, e: &SurfaceEnd) -> bool {
    let walks = s.spine.walks();
    let walk = &walks[e.walk];
    let pos = |h: &HalfEdge| walk.iter().position(|x| x == h);
    // Each side starts on the walk right after a tip; order sides by that position.
    let mut starts: Vec<(usize, usize)> = e
        .sides
        .iter()
        .filter_map(|&i| s.sides[i].half_edges.first().and_then(pos).map(|p| (p, i)))
        .collect();
    starts.sort();
    if starts.len() != e.sides.len() {
        return false;
    }
    let mut covered = 0;
    for (k, &(_, i)) in starts.iter().enumerate() {
        let side = &s.sides[i];
        covered += side.half_edges.len();
        if !side.is_cycle {
            let next_start = starts[(k + 1) % starts.len()].0;
            let last = side.half_edges.last().and_then(pos);
            if last.map(|p| (p + 1) % walk.len()) != Some(next_start) {
                return false;
            }
        }
    }
    covered == walk.len()
}

/// The limit surface of the flow: half-planes and half-cylinders on the sides of the
/// appended vertical graph at length `l`, feelers read as infinite rays.
pub fn y_infinity(s: &FlatSurface, l: &Q) -> Result<GeneralizedHalfPlaneSurface, HalfPlaneError> {
    let g = appended_graph(s, l)?;
    build_hps(&g.ribbon())
}

/// Residue of the end bounded by boundary walk `walk` of `g`: alternating sum of the
/// saddle-connection lengths of its sides. Feelers do not enter.
pub fn limit_residue_from_graph(g: &VerticalGraph, walk: usize) -> Q {
    let r = g.ribbon();
    let lengths: Vec<Q> = r.sides().iter().filter(|s| s.walk == walk).map(|s| r.side_length(s)).collect();
    alternating_residue(&lengths)
}

/// A maximal interval of the finite boundary of one side glued isometrically to the
/// boundary of another by `x ↦ offset − x`. Positions are arc length from the start of
/// each side's finite part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub from_side: usize,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub start: Q,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub end: Q,
    pub to_side: usize,
    #[serde(with = "flat_kernel::rational::serde_q")]
    pub offset: Q,
}

/// The gluing of side boundaries along finite spine edges, merged into maximal
/// continuous pieces. Each identified pair appears once from each side.
pub fn boundary_exchange(s: &GeneralizedHalfPlaneSurface) -> Vec<BoundaryPiece> {
    let spine = &s.spine;
    // Position of each finite half-edge along its side.
    let mut at = std::collections::HashMap::new();
    for (i, side) in s.sides.iter().enumerate() {
        let mut p = zero();
        for h in &side.half_edges {
            if spine.is_ray(h.edge) {
                continue;
            }
            let len = spine.edges[h.edge].length.clone().unwrap_or_else(zero);
            at.insert(*h, (i, p.clone(), len.clone()));
            p = &p + &len;
        }
    }
    let mut pieces: Vec<BoundaryPiece> = Vec::new();
    for (i, side) in s.sides.iter().enumerate() {
        for h in &side.half_edges {
            if spine.is_ray(h.edge) {
                continue;
            }
            let (_, p, len) = at[h].clone();
            let twin = HalfEdge { edge: h.edge, end: if h.end == End::A { End::B } else { End::A } };
            let (j, q, _) = at[&twin].clone();
            let offset = &p + &q + &len;
            let end = &p + &len;
            if let Some(last) = pieces.last_mut() {
                if last.from_side == i && last.to_side == j && last.end == p && last.offset == offset {
                    last.end = end;
                    continue;
                }
            }
            pieces.push(BoundaryPiece { from_side: i, start: p, end, to_side: j, offset });
        }
    }
    pieces.retain(|pc| !(&pc.end - &pc.start).is_zero());
    pieces
}
