use crate::GraftError;
use flat_kernel::rational::format_q;
use flat_kernel::{Corner, EdgeRef, FlatSurface, Gluing, Polygon, Sign, Q};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// A closed vertical geodesic made of polygon edges, listed in the order they are
/// traversed. Each edge must be given in the copy whose own orientation agrees
/// with the direction of travel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraftLocus {
    pub edges: Vec<EdgeRef>,
}

impl GraftLocus {
    pub fn new(edges: Vec<EdgeRef>) -> Self {
        GraftLocus { edges }
    }

    pub fn circumference(&self, s: &FlatSurface) -> Q {
        self.edges
            .iter()
            .map(|e| s.polygon(e.poly).edge_vector(e.edge).y.abs())
            .fold(Q::zero(), |a, b| a + b)
    }

    /// For each edge, whether it runs upward in its polygon.
    fn check(&self, s: &FlatSurface) -> Result<Vec<bool>, GraftError> {
        let bad = |m: &str| Err(GraftError::LocusNotEmbedded(m.to_string()));
        if self.edges.is_empty() {
            return bad("empty path");
        }
        let mut up = Vec::with_capacity(self.edges.len());
        let mut segments = BTreeSet::new();
        for &e in &self.edges {
            if e.poly >= s.polygons().len() || e.edge >= s.polygon(e.poly).len() {
                return bad("edge outside the surface");
            }
            let v = s.polygon(e.poly).edge_vector(e.edge);
            if !v.x.is_zero() {
                return Err(GraftError::LocusNotVertical(e));
            }
            up.push(v.y.is_positive());
            let twin = s.link(e).to;
            if !segments.insert(e.min(twin)) {
                return bad("a segment is traversed twice");
            }
        }
        let mut junctions = BTreeSet::new();
        let n = self.edges.len();
        for k in 0..n {
            let e = self.edges[k];
            let f = self.edges[(k + 1) % n];
            let m = s.polygon(e.poly).len();
            let arrive = s.class_of(Corner::new(e.poly, (e.edge + 1) % m));
            let leave = s.class_of(Corner::new(f.poly, f.edge));
            if arrive != leave {
                return bad("consecutive edges do not meet");
            }
            if s.vertex_classes()[arrive].angle_pi != 2 {
                return bad("path passes through a cone point");
            }
            if !junctions.insert(arrive) {
                return bad("path visits a point twice");
            }
        }
        Ok(up)
    }
}

/// Cuts `s` along the locus and inserts a flat cylinder of width `t`. The cylinder
/// lies to the right of the direction of travel; every new polygon is a `t × ℓ`
/// rectangle appended after the existing ones, so edge references into `s` stay valid.
pub fn graft_cylinder(s: &FlatSurface, locus: &GraftLocus, t: &Q) -> Result<FlatSurface, GraftError> {
    let up = locus.check(s)?;
    if t.is_negative() {
        return Err(GraftError::NegativeWidth(format_q(t)));
    }
    if t.is_zero() {
        return Ok(s.clone());
    }
    let (mut polygons, gluings, marking) = s.clone().into_parts();
    let base = polygons.len();
    let on_locus = |e: EdgeRef| locus.edges.iter().position(|&x| x == e);
    let mut out = Vec::with_capacity(gluings.len() + 2 * locus.edges.len());
    for g in gluings {
        if on_locus(g.a).is_none() && on_locus(g.b).is_none() {
            out.push(g);
        }
    }
    // Rectangle edges: 0 bottom, 1 right, 2 top, 3 left. An upward locus edge has its
    // polygon to the west, so the rectangle's left side faces it; a downward edge is
    // met by the right side.
    let zero = Q::zero();
    for (k, &e) in locus.edges.iter().enumerate() {
        let len = s.polygon(e.poly).edge_vector(e.edge).y.abs();
        polygons.push(Polygon::rectangle(&zero, &zero, t, &len));
        let r = base + k;
        let link = s.link(e);
        let (near, far) = if up[k] { (3, 1) } else { (1, 3) };
        out.push(Gluing::translation(e, EdgeRef::new(r, near)));
        out.push(Gluing::new(EdgeRef::new(r, far), link.to, link.map.sign));
    }
    let n = locus.edges.len();
    for k in 0..n {
        let next = (k + 1) % n;
        let exit = if up[k] { 2 } else { 0 };
        let entry = if up[next] { 0 } else { 2 };
        let sign = if up[k] == up[next] { Sign::Plus } else { Sign::Minus };
        out.push(Gluing::new(EdgeRef::new(base + k, exit), EdgeRef::new(base + next, entry), sign));
    }
    Ok(FlatSurface::new(polygons, out, marking)?)
}
