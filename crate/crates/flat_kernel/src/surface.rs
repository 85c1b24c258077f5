//! Glued polygons, their validation, and the combinatorics of vertex classes.

use crate::geom::{horizontal_crossings, is_simple, twice_signed_area, Vec2};
use crate::rational::{format_q, q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub poly: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(poly: usize, edge: usize) -> Self {
        EdgeRef { poly, edge }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.poly, self.edge)
    }
}

/// Vertex `vertex` of polygon `poly`, i.e. the start of edge `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub poly: usize,
    pub vertex: usize,
}

impl Corner {
    pub fn new(poly: usize, vertex: usize) -> Self {
        Corner { poly, vertex }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.poly, self.vertex)
    }
}

/// Linear part of a gluing isometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply(self, v: &Vec2) -> Vec2 {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => -v,
        }
    }

    pub fn apply_q(self, x: &Q) -> Q {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }

    pub fn compose(self, o: Sign) -> Sign {
        if self == o {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom(format!("gluing sign must be 1 or -1, got {v}")))
    }
}

/// The map `z ↦ sign·z + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfTranslation {
    pub sign: Sign,
    pub offset: Vec2,
}

impl HalfTranslation {
    pub fn identity() -> Self {
        HalfTranslation { sign: Sign::Plus, offset: Vec2::zero() }
    }

    pub fn apply(&self, z: &Vec2) -> Vec2 {
        &self.sign.apply(z) + &self.offset
    }

    pub fn apply_vec(&self, d: &Vec2) -> Vec2 {
        self.sign.apply(d)
    }

    pub fn inverse(&self) -> Self {
        HalfTranslation { sign: self.sign, offset: -&self.sign.apply(&self.offset) }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &HalfTranslation) -> Self {
        HalfTranslation {
            sign: self.sign.compose(other.sign),
            offset: &self.sign.apply(&other.offset) + &self.offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Polygon { vertices }
    }

    /// Axis-parallel rectangle `[x0, x0+w] × [y0, y0+h]`, counterclockwise from the lower left.
    pub fn rectangle(x0: &Q, y0: &Q, w: &Q, h: &Q) -> Self {
        let x1 = x0 + w;
        let y1 = y0 + h;
        Polygon::new(vec![
            Vec2::new(x0.clone(), y0.clone()),
            Vec2::new(x1.clone(), y0.clone()),
            Vec2::new(x1, y1.clone()),
            Vec2::new(x0.clone(), y1),
        ])
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn edge_start(&self, e: usize) -> &Vec2 {
        self.vertex(e)
    }

    pub fn edge_end(&self, e: usize) -> &Vec2 {
        self.vertex(e + 1)
    }

    pub fn edge_vector(&self, e: usize) -> Vec2 {
        self.edge_end(e) - self.edge_start(e)
    }

    pub fn area(&self) -> Q {
        twice_signed_area(&self.vertices) / q(2, 1)
    }

    pub fn map(&self, f: impl Fn(&Vec2) -> Vec2) -> Polygon {
        Polygon::new(self.vertices.iter().map(f).collect())
    }
}

/// Identification of edge `b` with edge `a` by `z ↦ sign·z + c`, which carries the
/// start of `a` to the end of `b`. Edge vectors then satisfy `v_b = −sign·v_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub sign: Sign,
}

impl Gluing {
    pub fn new(a: EdgeRef, b: EdgeRef, sign: Sign) -> Self {
        Gluing { a, b, sign }
    }

    pub fn translation(a: EdgeRef, b: EdgeRef) -> Self {
        Gluing::new(a, b, Sign::Plus)
    }

    pub fn rotation(a: EdgeRef, b: EdgeRef) -> Self {
        Gluing::new(a, b, Sign::Minus)
    }
}

/// Optional labels used to distinguish otherwise isometric surfaces and to promote
/// regular points to distinguished vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    #[serde(default)]
    pub edges: Vec<(EdgeRef, String)>,
    #[serde(default)]
    pub vertices: Vec<(Corner, String)>,
}

impl Marking {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.vertices.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("polygon {0} has fewer than three vertices")]
    DegeneratePolygon(usize),
    #[error("polygon {0} is not simple")]
    NonSimplePolygon(usize),
    #[error("polygon {0} is not counterclockwise")]
    NegativeOrientation(usize),
    #[error("edge {0} is not glued to an existing edge")]
    UnmatchedEdge(EdgeRef),
    #[error("edge {0} appears in more than one gluing")]
    EdgeGluedTwice(EdgeRef),
    #[error("edge {0} is glued to itself")]
    SelfGluedEdge(EdgeRef),
    #[error("edge {b} vector {vb} is not the image of edge {a} vector {va} under sign {sign}")]
    VectorMismatch { a: EdgeRef, b: EdgeRef, sign: Sign, va: Box<Vec2>, vb: Box<Vec2> },
    #[error("surface is disconnected")]
    Disconnected,
    #[error("vertex at corner {0} is a simple pole (cone angle π)")]
    SimplePole(Corner),
    #[error("marking refers to missing element {0}")]
    BadMarking(String),
}

/// How an edge is identified with its partner, in the frame of the edge's own polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub to: EdgeRef,
    pub map: HalfTranslation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// Corners in counterclockwise order around the vertex.
    pub corners: Vec<Corner>,
    /// Total cone angle divided by π.
    pub angle_pi: u32,
    pub label: Option<String>,
}

impl VertexClass {
    pub fn order(&self) -> i32 {
        self.angle_pi as i32 - 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConePoint {
    pub vertex_class: usize,
    pub angle_pi: u32,
    pub order: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSurface {
    polygons: Vec<Polygon>,
    gluings: Vec<Gluing>,
    marking: Marking,
    links: Vec<Vec<Link>>,
    corner_class: Vec<Vec<usize>>,
    classes: Vec<VertexClass>,
}

/// Validates polygons and gluings and resolves vertex classes.
pub fn build_surface(polygons: Vec<Polygon>, gluings: Vec<Gluing>) -> Result<FlatSurface, SurfaceError> {
    FlatSurface::new(polygons, gluings, Marking::default())
}

impl FlatSurface {
    pub fn new(polygons: Vec<Polygon>, gluings: Vec<Gluing>, marking: Marking) -> Result<Self, SurfaceError> {
        for (i, p) in polygons.iter().enumerate() {
            if p.len() < 3 {
                return Err(SurfaceError::DegeneratePolygon(i));
            }
            if !is_simple(&p.vertices) {
                return Err(SurfaceError::NonSimplePolygon(i));
            }
            if !twice_signed_area(&p.vertices).is_positive() {
                return Err(SurfaceError::NegativeOrientation(i));
            }
        }
        let exists = |e: &EdgeRef| e.poly < polygons.len() && e.edge < polygons[e.poly].len();
        let mut slot: Vec<Vec<Option<Link>>> = polygons.iter().map(|p| vec![None; p.len()]).collect();
        for g in &gluings {
            for e in [&g.a, &g.b] {
                if !exists(e) {
                    return Err(SurfaceError::UnmatchedEdge(*e));
                }
            }
            if g.a == g.b {
                return Err(SurfaceError::SelfGluedEdge(g.a));
            }
            let pa = &polygons[g.a.poly];
            let pb = &polygons[g.b.poly];
            let va = pa.edge_vector(g.a.edge);
            let vb = pb.edge_vector(g.b.edge);
            if vb != -&g.sign.apply(&va) {
                return Err(SurfaceError::VectorMismatch { a: g.a, b: g.b, sign: g.sign, va: Box::new(va), vb: Box::new(vb) });
            }
            let map = HalfTranslation {
                sign: g.sign,
                offset: pb.edge_end(g.b.edge) - &g.sign.apply(pa.edge_start(g.a.edge)),
            };
            for (from, to, m) in [(g.a, g.b, map.clone()), (g.b, g.a, map.inverse())] {
                let s = &mut slot[from.poly][from.edge];
                if s.is_some() {
                    return Err(SurfaceError::EdgeGluedTwice(from));
                }
                *s = Some(Link { to, map: m });
            }
        }
        let mut links = Vec::with_capacity(polygons.len());
        for (p, row) in slot.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (e, l) in row.into_iter().enumerate() {
                out.push(l.ok_or(SurfaceError::UnmatchedEdge(EdgeRef::new(p, e)))?);
            }
            links.push(out);
        }
        // Connectivity over polygon adjacency.
        let mut seen = vec![false; polygons.len()];
        let mut stack = vec![0usize];
        if !polygons.is_empty() {
            seen[0] = true;
        }
        while let Some(p) = stack.pop() {
            for l in &links[p] {
                if !seen[l.to.poly] {
                    seen[l.to.poly] = true;
                    stack.push(l.to.poly);
                }
            }
        }
        if polygons.is_empty() || seen.iter().any(|s| !s) {
            return Err(SurfaceError::Disconnected);
        }
        for (e, _) in &marking.edges {
            if !exists(e) {
                return Err(SurfaceError::BadMarking(e.to_string()));
            }
        }
        for (c, _) in &marking.vertices {
            if c.poly >= polygons.len() || c.vertex >= polygons[c.poly].len() {
                return Err(SurfaceError::BadMarking(c.to_string()));
            }
        }
        let mut s = FlatSurface {
            polygons,
            gluings,
            marking,
            links,
            corner_class: Vec::new(),
            classes: Vec::new(),
        };
        s.resolve_vertices()?;
        Ok(s)
    }

    fn resolve_vertices(&mut self) -> Result<(), SurfaceError> {
        let mut corner_class: Vec<Vec<usize>> = self.polygons.iter().map(|p| vec![usize::MAX; p.len()]).collect();
        let mut classes = Vec::new();
        for p in 0..self.polygons.len() {
            for i in 0..self.polygons[p].len() {
                if corner_class[p][i] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let start = Corner::new(p, i);
                let mut corners = Vec::new();
                let mut c = start;
                let mut angle = 0;
                loop {
                    corner_class[c.poly][c.vertex] = id;
                    angle += self.corner_angle_pi_count(c);
                    corners.push(c);
                    c = self.next_corner(c);
                    if c == start {
                        break;
                    }
                }
                if angle == 1 {
                    return Err(SurfaceError::SimplePole(start));
                }
                let label = self
                    .marking
                    .vertices
                    .iter()
                    .find(|(mc, _)| corners.contains(mc))
                    .map(|(_, l)| l.clone());
                classes.push(VertexClass { corners, angle_pi: angle, label });
            }
        }
        self.corner_class = corner_class;
        self.classes = classes;
        Ok(())
    }

    /// Outgoing edge direction and reversed incoming direction at a corner.
    pub fn corner_rays(&self, c: Corner) -> (Vec2, Vec2) {
        let p = &self.polygons[c.poly];
        let n = p.len();
        let u = p.edge_vector(c.vertex);
        let w = p.vertex((c.vertex + n - 1) % n) - p.vertex(c.vertex);
        (u, w)
    }

    fn corner_angle_pi_count(&self, c: Corner) -> u32 {
        let (u, w) = self.corner_rays(c);
        horizontal_crossings(&u, &w)
    }

    /// The corner met next when turning counterclockwise around the vertex.
    pub fn next_corner(&self, c: Corner) -> Corner {
        let n = self.polygons[c.poly].len();
        let incoming = EdgeRef::new(c.poly, (c.vertex + n - 1) % n);
        let to = self.links[incoming.poly][incoming.edge].to;
        Corner::new(to.poly, to.edge)
    }

    pub fn prev_corner(&self, c: Corner) -> Corner {
        let to = self.links[c.poly][c.vertex].to;
        let m = self.polygons[to.poly].len();
        Corner::new(to.poly, (to.edge + 1) % m)
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    pub fn link(&self, e: EdgeRef) -> &Link {
        &self.links[e.poly][e.edge]
    }

    pub fn edge_refs(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.polygons
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.len()).map(move |e| EdgeRef::new(p, e)))
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn class_of(&self, c: Corner) -> usize {
        self.corner_class[c.poly][c.vertex]
    }

    pub fn edge_label(&self, e: EdgeRef) -> Option<&str> {
        self.marking.edges.iter().find(|(r, _)| *r == e).map(|(_, l)| l.as_str())
    }

    /// Vertex classes with angle above 2π, in class order.
    pub fn cone_data(&self) -> Vec<ConePoint> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.angle_pi > 2)
            .map(|(i, c)| ConePoint { vertex_class: i, angle_pi: c.angle_pi, order: c.order() })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.classes.len() as i64 - self.gluings.len() as i64 + self.polygons.len() as i64
    }

    pub fn genus(&self) -> u32 {
        ((2 - self.euler_characteristic()) / 2) as u32
    }

    /// Σ (angle/π − 2) over all vertex classes.
    pub fn order_sum(&self) -> i64 {
        self.classes.iter().map(|c| c.order() as i64).sum()
    }

    pub fn area(&self) -> Q {
        self.polygons.iter().map(Polygon::area).fold(Q::zero(), |a, b| a + b)
    }

    /// Applies an orientation-preserving linear map to every polygon. Gluing
    /// combinatorics and signs are kept.
    pub fn map_linear(&self, a: &Q, b: &Q, c: &Q, d: &Q) -> Result<FlatSurface, SurfaceError> {
        let f = |z: &Vec2| Vec2::new(a * &z.x + b * &z.y, c * &z.x + d * &z.y);
        let polys = self.polygons.iter().map(|p| p.map(f)).collect();
        FlatSurface::new(polys, self.gluings.clone(), self.marking.clone())
    }

    /// Replaces the marking.
    pub fn with_marking(&self, marking: Marking) -> Result<FlatSurface, SurfaceError> {
        FlatSurface::new(self.polygons.clone(), self.gluings.clone(), marking)
    }

    pub fn into_parts(self) -> (Vec<Polygon>, Vec<Gluing>, Marking) {
        (self.polygons, self.gluings, self.marking)
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.polygons.iter().enumerate() {
            let pts: Vec<String> = p
                .vertices
                .iter()
                .map(|v| format!("({}, {})", format_q(&v.x), format_q(&v.y)))
                .collect();
            s.push_str(&format!("P{i}: {}\n", pts.join(" ")));
        }
        for g in &self.gluings {
            s.push_str(&format!("{} ~ {} sign {}\n", g.a, g.b, g.sign));
        }
        s
    }
}

/// Relabeling data: a polygon permutation plus, per polygon, a cyclic vertex shift,
/// an optional rotation by π, and a translation.
#[derive(Clone, Debug)]
pub struct Relabeling {
    /// `perm[old] = new` polygon index.
    pub perm: Vec<usize>,
    pub shift: Vec<usize>,
    pub rotate: Vec<bool>,
    pub translate: Vec<Vec2>,
    pub swap_sides: Vec<bool>,
}

impl Relabeling {
    pub fn identity(s: &FlatSurface) -> Self {
        let n = s.polygons().len();
        Relabeling {
            perm: (0..n).collect(),
            shift: vec![0; n],
            rotate: vec![false; n],
            translate: vec![Vec2::zero(); n],
            swap_sides: vec![false; s.gluings().len()],
        }
    }

    fn new_edge(&self, s: &FlatSurface, e: EdgeRef) -> EdgeRef {
        let n = s.polygons[e.poly].len();
        EdgeRef::new(self.perm[e.poly], (e.edge + n - self.shift[e.poly] % n) % n)
    }

    fn new_corner(&self, s: &FlatSurface, c: Corner) -> Corner {
        let e = self.new_edge(s, EdgeRef::new(c.poly, c.vertex));
        Corner::new(e.poly, e.edge)
    }

    pub fn apply(&self, s: &FlatSurface) -> Result<FlatSurface, SurfaceError> {
        let n = s.polygons.len();
        let mut polys: Vec<Option<Polygon>> = vec![None; n];
        for (old, p) in s.polygons.iter().enumerate() {
            let m = p.len();
            let r = self.shift[old] % m;
            let verts = (0..m)
                .map(|j| {
                    let v = p.vertex(j + r);
                    let v = if self.rotate[old] { -v } else { v.clone() };
                    &v + &self.translate[old]
                })
                .collect();
            polys[self.perm[old]] = Some(Polygon::new(verts));
        }
        let sign_of = |p: usize| if self.rotate[p] { Sign::Minus } else { Sign::Plus };
        let gluings = s
            .gluings
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let a = self.new_edge(s, g.a);
                let b = self.new_edge(s, g.b);
                let sign = sign_of(g.b.poly).compose(g.sign).compose(sign_of(g.a.poly));
                if self.swap_sides[i] {
                    Gluing::new(b, a, sign)
                } else {
                    Gluing::new(a, b, sign)
                }
            })
            .collect();
        let marking = Marking {
            edges: s.marking.edges.iter().map(|(e, l)| (self.new_edge(s, *e), l.clone())).collect(),
            vertices: s.marking.vertices.iter().map(|(c, l)| (self.new_corner(s, *c), l.clone())).collect(),
        };
        FlatSurface::new(polys.into_iter().map(|p| p.expect("permutation")).collect(), gluings, marking)
    }
}

/// Counts corners per class, for quick comparisons.
pub fn class_angle_histogram(s: &FlatSurface) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for c in s.vertex_classes() {
        *h.entry(c.angle_pi).or_insert(0) += 1;
    }
    h
}
