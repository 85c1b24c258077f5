//! Surfaces assembled from weighted branches. A branch of weight `μ` and height `h`
//! becomes a `s·μ × h` rectangle cut along its vertical midline into two halves; each
//! half belongs to one complementary piece. Horizontal sides are glued at switches
//! with positions measured in weight, vertical sides along the spines of the pieces
//! with positions measured in height. Only the horizontal scale `s` depends on the
//! grafting time.

use crate::GraftError;
use flat_kernel::rational::{format_q, from_f64, q, serde_q, serde_q_vec};
use flat_kernel::{EdgeRef, FlatSurface, Gluing, Marking, Polygon, Sign, Vec2, Q};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use vertical_graph::alternating_residue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Rectangle,
    /// Top and bottom are glued to each other; the height is the circumference.
    Annulus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub id: String,
    #[serde(with = "serde_q")]
    pub weight: Q,
    #[serde(with = "serde_q")]
    pub height: Q,
    pub kind: BranchKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    Top,
    Bottom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flank {
    Left,
    Right,
}

/// `[from, to]` on a horizontal side, in weight units from the left end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalSegment {
    pub branch: usize,
    pub face: Face,
    #[serde(with = "serde_q")]
    pub from: Q,
    #[serde(with = "serde_q")]
    pub to: Q,
}

/// `[from, to]` on a vertical side, in height units from the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalSegment {
    pub branch: usize,
    pub flank: Flank,
    #[serde(with = "serde_q")]
    pub from: Q,
    #[serde(with = "serde_q")]
    pub to: Q,
}

/// Two boundary segments of equal length glued together. Top to bottom and left to
/// right are glued by translation, like faces by a rotation by π.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Identification {
    Horizontal { a: HorizontalSegment, b: HorizontalSegment },
    Vertical { a: VerticalSegment, b: VerticalSegment },
}

/// The half of a branch on one side of its midline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Half {
    pub branch: usize,
    pub side: Flank,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub halves: Vec<Half>,
    /// One residue per end, in any order.
    #[serde(with = "serde_q_vec")]
    pub end_residues: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainTrackData {
    pub branches: Vec<Branch>,
    pub gluing: Vec<Identification>,
    pub pieces: Vec<Piece>,
    /// Rectangle branches must be strictly taller than this.
    #[serde(with = "serde_q")]
    pub min_height: Q,
}

/// Euclidean width per unit of weight; `2πt` at grafting time `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthScale(Q);

impl WidthScale {
    pub fn new(s: Q) -> Result<Self, GraftError> {
        if !s.is_positive() {
            return Err(GraftError::InvalidScale(format_q(&s)));
        }
        Ok(WidthScale(s))
    }

    /// `2πt` rounded to the nearest double.
    pub fn from_time(t: f64) -> Result<Self, GraftError> {
        let s = from_f64(2.0 * PI * t).ok_or_else(|| GraftError::InvalidScale(t.to_string()))?;
        Self::new(s)
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn times(&self, k: &Q) -> Result<Self, GraftError> {
        Self::new(&self.0 * k)
    }
}

/// One boundary component of a piece: the lengths of its vertical sides in cyclic
/// order, and whether it is a closed curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceEnd {
    pub piece: usize,
    pub sides: Vec<Q>,
    pub closed: bool,
}

impl PieceEnd {
    /// The length of a closed boundary; otherwise the alternating sum of the sides.
    pub fn residue(&self) -> Q {
        if self.closed {
            self.sides.iter().fold(Q::zero(), |a, b| a + b)
        } else {
            alternating_residue(&self.sides)
        }
    }
}

fn half_index(h: Half) -> usize {
    2 * h.branch + usize::from(h.side == Flank::Right)
}

fn invalid(m: impl Into<String>) -> GraftError {
    GraftError::InvalidTrack(m.into())
}

/// Checks that `segs` tile `[0, len]` without gaps or overlaps.
fn tiles(mut segs: Vec<(Q, Q)>, len: &Q) -> bool {
    segs.sort();
    let mut at = Q::zero();
    for (a, b) in segs {
        if a != at {
            return false;
        }
        at = b;
    }
    at == *len
}

impl TrainTrackData {
    fn validate(&self) -> Result<(), GraftError> {
        let nb = self.branches.len();
        if nb == 0 {
            return Err(invalid("no branches"));
        }
        for (i, b) in self.branches.iter().enumerate() {
            if !b.weight.is_positive() || !b.height.is_positive() {
                return Err(invalid(format!("branch {i} needs positive weight and height")));
            }
            if b.kind == BranchKind::Rectangle && b.height <= self.min_height {
                return Err(GraftError::HTooSmall {
                    branch: i,
                    height: format_q(&b.height),
                    min: format_q(&self.min_height),
                });
            }
        }
        let mut horiz: HashMap<(usize, Face), Vec<(Q, Q)>> = HashMap::new();
        let mut vert: HashMap<(usize, Flank), Vec<(Q, Q)>> = HashMap::new();
        let mut piece_of = vec![None; 2 * nb];
        for (k, p) in self.pieces.iter().enumerate() {
            for h in &p.halves {
                if h.branch >= nb {
                    return Err(invalid(format!("piece {k} names missing branch {}", h.branch)));
                }
                if piece_of[half_index(*h)].replace(k).is_some() {
                    return Err(invalid(format!("half {:?} of branch {} is in two pieces", h.side, h.branch)));
                }
            }
        }
        if let Some(i) = piece_of.iter().position(Option::is_none) {
            return Err(invalid(format!("half {i} belongs to no piece")));
        }
        for g in &self.gluing {
            match g {
                Identification::Horizontal { a, b } => {
                    for s in [a, b] {
                        let br = self.branches.get(s.branch).ok_or_else(|| invalid("segment on missing branch"))?;
                        if br.kind == BranchKind::Annulus {
                            return Err(invalid(format!("annulus {} has no free horizontal side", s.branch)));
                        }
                        if s.from.is_negative() || s.from >= s.to || s.to > br.weight {
                            return Err(invalid(format!("bad horizontal segment on branch {}", s.branch)));
                        }
                        horiz.entry((s.branch, s.face)).or_default().push((s.from.clone(), s.to.clone()));
                    }
                    if &a.to - &a.from != &b.to - &b.from {
                        return Err(invalid("glued horizontal segments differ in length"));
                    }
                }
                Identification::Vertical { a, b } => {
                    for s in [a, b] {
                        let br = self.branches.get(s.branch).ok_or_else(|| invalid("segment on missing branch"))?;
                        if s.from.is_negative() || s.from >= s.to || s.to > br.height {
                            return Err(invalid(format!("bad vertical segment on branch {}", s.branch)));
                        }
                        vert.entry((s.branch, s.flank)).or_default().push((s.from.clone(), s.to.clone()));
                    }
                    if &a.to - &a.from != &b.to - &b.from {
                        return Err(invalid("glued vertical segments differ in length"));
                    }
                    let pa = piece_of[half_index(Half { branch: a.branch, side: a.flank })];
                    let pb = piece_of[half_index(Half { branch: b.branch, side: b.flank })];
                    if pa != pb {
                        return Err(invalid("a vertical gluing joins two different pieces"));
                    }
                }
            }
        }
        for (i, b) in self.branches.iter().enumerate() {
            if b.kind == BranchKind::Rectangle {
                for f in [Face::Top, Face::Bottom] {
                    if !tiles(horiz.remove(&(i, f)).unwrap_or_default(), &b.weight) {
                        return Err(invalid(format!("{f:?} side of branch {i} is not covered exactly once")));
                    }
                }
            }
            for f in [Flank::Left, Flank::Right] {
                if !tiles(vert.remove(&(i, f)).unwrap_or_default(), &b.height) {
                    return Err(invalid(format!("{f:?} side of branch {i} is not covered exactly once")));
                }
            }
        }
        Ok(())
    }

    /// Fills in the recorded residues from the branch data.
    pub fn with_derived_residues(mut self) -> Result<Self, GraftError> {
        let ends = piece_ends(&self)?;
        for (k, p) in self.pieces.iter_mut().enumerate() {
            p.end_residues = ends.iter().filter(|e| e.piece == k).map(PieceEnd::residue).collect();
        }
        Ok(self)
    }

    /// A single annulus of weight `w` and circumference `h` whose two vertical sides
    /// are glued: a flat torus.
    pub fn single_annulus(w: Q, h: Q) -> Self {
        let seg = |flank| VerticalSegment { branch: 0, flank, from: Q::zero(), to: h.clone() };
        TrainTrackData {
            branches: vec![Branch { id: "a".into(), weight: w, height: h.clone(), kind: BranchKind::Annulus }],
            gluing: vec![Identification::Vertical { a: seg(Flank::Left), b: seg(Flank::Right) }],
            pieces: vec![Piece {
                halves: vec![Half { branch: 0, side: Flank::Left }, Half { branch: 0, side: Flank::Right }],
                end_residues: vec![h.clone(), h],
            }],
            min_height: Q::zero(),
        }
    }

    /// Splits rectangle branch `b` into two parallel branches of weights `at` and
    /// `μ − at` glued along a new full-height vertical segment. The new branch is
    /// appended; the two halves facing the new spine form a new piece. Midlines
    /// move, so the boundaries of neighbouring pieces change and every residue is
    /// derived afresh.
    pub fn split_branch(&self, b: usize, at: &Q) -> Result<TrainTrackData, GraftError> {
        let br = self.branches.get(b).ok_or_else(|| invalid("no such branch"))?;
        if br.kind != BranchKind::Rectangle || !at.is_positive() || *at >= br.weight {
            return Err(invalid("split point must lie inside a rectangle branch"));
        }
        let mut t = self.clone();
        let n = t.branches.len();
        t.branches[b].weight = at.clone();
        t.branches.push(Branch {
            id: format!("{}'", br.id),
            weight: &br.weight - at,
            height: br.height.clone(),
            kind: BranchKind::Rectangle,
        });
        for face in [Face::Top, Face::Bottom] {
            cut_horizontal(&mut t.gluing, b, face, at);
        }
        for g in &mut t.gluing {
            match g {
                Identification::Horizontal { a, b: c } => {
                    for s in [a, c] {
                        if s.branch == b && s.from >= *at {
                            s.branch = n;
                            s.from -= at;
                            s.to -= at;
                        }
                    }
                }
                Identification::Vertical { a, b: c } => {
                    for s in [a, c] {
                        if s.branch == b && s.flank == Flank::Right {
                            s.branch = n;
                        }
                    }
                }
            }
        }
        let full = |branch, flank| VerticalSegment { branch, flank, from: Q::zero(), to: br.height.clone() };
        t.gluing.push(Identification::Vertical { a: full(b, Flank::Right), b: full(n, Flank::Left) });
        for p in &mut t.pieces {
            for h in &mut p.halves {
                if *h == (Half { branch: b, side: Flank::Right }) {
                    h.branch = n;
                }
            }
        }
        t.pieces.push(Piece {
            halves: vec![Half { branch: b, side: Flank::Right }, Half { branch: n, side: Flank::Left }],
            end_residues: Vec::new(),
        });
        t.with_derived_residues()
    }
}

/// Splits the horizontal identification whose segment on `(b, face)` contains `x`
/// in its interior, so that `x` becomes a segment endpoint.
fn cut_horizontal(gluing: &mut Vec<Identification>, b: usize, face: Face, x: &Q) {
    let found = gluing.iter().enumerate().find_map(|(i, g)| match g {
        Identification::Horizontal { a, b: c } => [(a, c), (c, a)]
            .into_iter()
            .find(|(s, _)| s.branch == b && s.face == face && s.from < *x && *x < s.to)
            .map(|(s, o)| (i, s.clone(), o.clone())),
        _ => None,
    });
    let Some((i, s, o)) = found else { return };
    let d = x - &s.from;
    let y = if s.face == o.face { &o.to - &d } else { &o.from + &d };
    let seg = |t: &HorizontalSegment, from: &Q, to: &Q| HorizontalSegment {
        branch: t.branch,
        face: t.face,
        from: from.clone(),
        to: to.clone(),
    };
    let (first, second) = if s.face == o.face {
        (seg(&o, &y, &o.to), seg(&o, &o.from, &y))
    } else {
        (seg(&o, &o.from, &y), seg(&o, &y, &o.to))
    };
    gluing[i] = Identification::Horizontal { a: seg(&s, &s.from, x), b: first };
    gluing.push(Identification::Horizontal { a: seg(&s, x, &s.to), b: second });
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    H(usize, Face, Q, Q),
    V(usize, Flank, Q, Q),
    Mid(usize, Flank),
}

struct Assembly {
    surface: FlatSurface,
    midline: Vec<Vec<bool>>,
}

fn horizontal_breakpoints(t: &TrainTrackData) -> HashMap<(usize, Face), BTreeSet<Q>> {
    let mut bp: HashMap<(usize, Face), BTreeSet<Q>> = HashMap::new();
    let two = q(2, 1);
    for (i, b) in t.branches.iter().enumerate() {
        for f in [Face::Top, Face::Bottom] {
            bp.entry((i, f)).or_default().extend([Q::zero(), &b.weight / &two, b.weight.clone()]);
        }
    }
    let segs: Vec<(&HorizontalSegment, &HorizontalSegment)> = t
        .gluing
        .iter()
        .filter_map(|g| match g {
            Identification::Horizontal { a, b } => Some((a, b)),
            _ => None,
        })
        .collect();
    for (a, b) in &segs {
        for s in [a, b] {
            bp.get_mut(&(s.branch, s.face)).expect("branch").extend([s.from.clone(), s.to.clone()]);
        }
    }
    // Midpoints are the only interior points; one exchange in each direction settles them.
    for (a, b) in &segs {
        for (s, o) in [(a, b), (b, a)] {
            let inner: Vec<Q> = bp[&(s.branch, s.face)].range(s.from.clone()..=s.to.clone()).cloned().collect();
            let images = inner.iter().map(|x| image(s, o, x)).collect::<Vec<_>>();
            bp.get_mut(&(o.branch, o.face)).expect("branch").extend(images);
        }
    }
    bp
}

/// Image under the identification `s → o` of the point `x` of `s`.
fn image(s: &HorizontalSegment, o: &HorizontalSegment, x: &Q) -> Q {
    if s.face == o.face {
        &o.to - (x - &s.from)
    } else {
        &o.from + (x - &s.from)
    }
}

fn vertical_breakpoints(t: &TrainTrackData) -> HashMap<(usize, Flank), BTreeSet<Q>> {
    let mut bp: HashMap<(usize, Flank), BTreeSet<Q>> = HashMap::new();
    for g in &t.gluing {
        if let Identification::Vertical { a, b } = g {
            for s in [a, b] {
                bp.entry((s.branch, s.flank)).or_default().extend([s.from.clone(), s.to.clone()]);
            }
        }
    }
    bp
}

fn assemble(t: &TrainTrackData, s: &WidthScale) -> Result<Assembly, GraftError> {
    t.validate()?;
    let two = q(2, 1);
    let hbp = horizontal_breakpoints(t);
    let vbp = vertical_breakpoints(t);
    let mut polygons = Vec::with_capacity(2 * t.branches.len());
    let mut midline = Vec::with_capacity(2 * t.branches.len());
    let mut edge_of: HashMap<Key, EdgeRef> = HashMap::new();
    for (i, b) in t.branches.iter().enumerate() {
        let mid = &b.weight / &two;
        for side in [Flank::Left, Flank::Right] {
            let p = polygons.len();
            let (lo, hi, shift) = match side {
                Flank::Left => (Q::zero(), mid.clone(), Q::zero()),
                Flank::Right => (mid.clone(), b.weight.clone(), mid.clone()),
            };
            let x = |w: &Q| s.value() * (w - &shift);
            let xs = |f: Face| -> Vec<Q> { hbp[&(i, f)].range(lo.clone()..=hi.clone()).cloned().collect() };
            let ys: Vec<Q> = vbp[&(i, side)].iter().cloned().collect();
            let (w_end, h) = (x(&hi), b.height.clone());
            let mut verts = Vec::new();
            let mut keys = Vec::new();
            let bottom = xs(Face::Bottom);
            for k in 0..bottom.len() - 1 {
                verts.push(Vec2::new(x(&bottom[k]), Q::zero()));
                keys.push(Key::H(i, Face::Bottom, bottom[k].clone(), bottom[k + 1].clone()));
            }
            if side == Flank::Right {
                for k in 0..ys.len() - 1 {
                    verts.push(Vec2::new(w_end.clone(), ys[k].clone()));
                    keys.push(Key::V(i, Flank::Right, ys[k].clone(), ys[k + 1].clone()));
                }
            } else {
                verts.push(Vec2::new(w_end.clone(), Q::zero()));
                keys.push(Key::Mid(i, Flank::Left));
            }
            let top = xs(Face::Top);
            for k in (1..top.len()).rev() {
                verts.push(Vec2::new(x(&top[k]), h.clone()));
                keys.push(Key::H(i, Face::Top, top[k - 1].clone(), top[k].clone()));
            }
            if side == Flank::Left {
                for k in (1..ys.len()).rev() {
                    verts.push(Vec2::new(Q::zero(), ys[k].clone()));
                    keys.push(Key::V(i, Flank::Left, ys[k - 1].clone(), ys[k].clone()));
                }
            } else {
                verts.push(Vec2::new(Q::zero(), h.clone()));
                keys.push(Key::Mid(i, Flank::Right));
            }
            midline.push(keys.iter().map(|k| matches!(k, Key::Mid(..))).collect());
            for (e, k) in keys.into_iter().enumerate() {
                edge_of.insert(k, EdgeRef::new(p, e));
            }
            polygons.push(Polygon::new(verts));
        }
    }
    let mut gluings = Vec::new();
    for (i, b) in t.branches.iter().enumerate() {
        gluings.push(Gluing::translation(edge_of[&Key::Mid(i, Flank::Left)], edge_of[&Key::Mid(i, Flank::Right)]));
        if b.kind == BranchKind::Annulus {
            let mid = &b.weight / &two;
            for (lo, hi) in [(Q::zero(), mid.clone()), (mid.clone(), b.weight.clone())] {
                gluings.push(Gluing::translation(
                    edge_of[&Key::H(i, Face::Top, lo.clone(), hi.clone())],
                    edge_of[&Key::H(i, Face::Bottom, lo, hi)],
                ));
            }
        }
    }
    for g in &t.gluing {
        match g {
            Identification::Horizontal { a, b } => {
                let pts: Vec<Q> = hbp[&(a.branch, a.face)].range(a.from.clone()..=a.to.clone()).cloned().collect();
                let sign = if a.face == b.face { Sign::Minus } else { Sign::Plus };
                for w in pts.windows(2) {
                    let (u, v) = (image(a, b, &w[0]), image(a, b, &w[1]));
                    let (u, v) = if u < v { (u, v) } else { (v, u) };
                    gluings.push(Gluing::new(
                        edge_of[&Key::H(a.branch, a.face, w[0].clone(), w[1].clone())],
                        edge_of[&Key::H(b.branch, b.face, u, v)],
                        sign,
                    ));
                }
            }
            Identification::Vertical { a, b } => {
                let sign = if a.flank == b.flank { Sign::Minus } else { Sign::Plus };
                gluings.push(Gluing::new(
                    edge_of[&Key::V(a.branch, a.flank, a.from.clone(), a.to.clone())],
                    edge_of[&Key::V(b.branch, b.flank, b.from.clone(), b.to.clone())],
                    sign,
                ));
            }
        }
    }
    let surface = FlatSurface::new(polygons, gluings, Marking::default())?;
    Ok(Assembly { surface, midline })
}

fn ends_of(t: &TrainTrackData, a: &Assembly) -> Vec<PieceEnd> {
    let s = &a.surface;
    let mut piece_of = vec![0; s.polygons().len()];
    for (k, p) in t.pieces.iter().enumerate() {
        for h in &p.halves {
            piece_of[half_index(*h)] = k;
        }
    }
    let boundary = |e: EdgeRef| a.midline[e.poly][e.edge] || piece_of[e.poly] != piece_of[s.link(e).to.poly];
    let next = |e: EdgeRef| {
        let mut f = EdgeRef::new(e.poly, (e.edge + 1) % s.polygon(e.poly).len());
        while !boundary(f) {
            let g = s.link(f).to;
            f = EdgeRef::new(g.poly, (g.edge + 1) % s.polygon(g.poly).len());
        }
        f
    };
    let mut seen = BTreeSet::new();
    let mut ends = Vec::new();
    for e in s.edge_refs() {
        if !boundary(e) || seen.contains(&e) {
            continue;
        }
        let mut cycle = vec![e];
        seen.insert(e);
        let mut f = next(e);
        while f != e {
            seen.insert(f);
            cycle.push(f);
            f = next(f);
        }
        let vertical: Vec<Option<Q>> = cycle
            .iter()
            .map(|e| {
                let v = s.polygon(e.poly).edge_vector(e.edge);
                v.x.is_zero().then(|| v.y.abs())
            })
            .collect();
        let closed = vertical.iter().all(Option::is_some);
        let mut sides = Vec::new();
        if closed {
            sides.push(vertical.iter().flatten().fold(Q::zero(), |a, b| a + b));
        } else {
            let start = vertical.iter().position(Option::is_none).expect("not closed");
            let mut run: Option<Q> = None;
            for k in 1..=vertical.len() {
                match &vertical[(start + k) % vertical.len()] {
                    Some(l) => run = Some(run.unwrap_or_else(Q::zero) + l),
                    None => sides.extend(run.take()),
                }
            }
        }
        ends.push(PieceEnd { piece: piece_of[e.poly], sides, closed });
    }
    ends.sort_by_key(|e| e.piece);
    ends
}

/// Boundary components of every piece, computed from the branch data.
pub fn piece_ends(t: &TrainTrackData) -> Result<Vec<PieceEnd>, GraftError> {
    let a = assemble(t, &WidthScale(q(1, 1)))?;
    Ok(ends_of(t, &a))
}

/// The surface `Y_t` at width scale `s = 2πt`: rectangle and annulus branches of
/// width `s·μ` and their recorded heights, glued as the track prescribes. The
/// recorded end residues must match those of the assembled pieces.
pub fn build_yt(t: &TrainTrackData, s: &WidthScale) -> Result<FlatSurface, GraftError> {
    let a = assemble(t, s)?;
    let ends = ends_of(t, &a);
    for (k, p) in t.pieces.iter().enumerate() {
        let mut computed: Vec<Q> = ends.iter().filter(|e| e.piece == k).map(PieceEnd::residue).collect();
        let mut recorded = p.end_residues.clone();
        computed.sort();
        recorded.sort();
        if computed != recorded {
            return Err(GraftError::ResidueMismatch {
                piece: k,
                recorded: recorded.iter().map(format_q).collect(),
                computed: computed.iter().map(format_q).collect(),
            });
        }
    }
    Ok(a.surface)
}

/// A random valid track with `n` branches: rectangles side by side in horizontal
/// bands (full-height vertical gluings along a random permutation), tops glued to
/// bottoms by a random interval exchange, and the odd annulus. Residues are derived.
pub fn random_track<R: Rng>(rng: &mut R, n: usize) -> TrainTrackData {
    assert!(n > 0, "at least one branch");
    loop {
        let min_height = q(1, 2);
        let kinds: Vec<BranchKind> = (0..n)
            .map(|_| if rng.gen_ratio(1, 5) { BranchKind::Annulus } else { BranchKind::Rectangle })
            .collect();
        let mut rho: Vec<usize> = (0..n).collect();
        rho.shuffle(rng);
        let mut height: Vec<Option<Q>> = vec![None; n];
        for i in 0..n {
            if height[i].is_some() {
                continue;
            }
            let h = &min_height + q(rng.gen_range(1..=6), rng.gen_range(1..=2));
            let mut j = i;
            loop {
                height[j] = Some(h.clone());
                j = rho[j];
                if j == i {
                    break;
                }
            }
        }
        let branches: Vec<Branch> = (0..n)
            .map(|i| Branch {
                id: format!("b{i}"),
                weight: q(rng.gen_range(1..=6), rng.gen_range(1..=3)),
                height: height[i].clone().expect("assigned"),
                kind: kinds[i],
            })
            .collect();
        let mut gluing = Vec::new();
        for i in 0..n {
            let seg = |branch, flank| VerticalSegment { branch, flank, from: Q::zero(), to: branches[i].height.clone() };
            gluing.push(Identification::Vertical { a: seg(i, Flank::Left), b: seg(rho[i], Flank::Right) });
        }
        let rects: Vec<usize> = (0..n).filter(|&i| kinds[i] == BranchKind::Rectangle).collect();
        let mut tops = rects.clone();
        let mut bottoms = rects.clone();
        tops.shuffle(rng);
        bottoms.shuffle(rng);
        let layout = |order: &[usize]| -> Vec<(usize, Q, Q)> {
            let mut at = Q::zero();
            order
                .iter()
                .map(|&i| {
                    let end = &at + &branches[i].weight;
                    let r = (i, at.clone(), end.clone());
                    at = end;
                    r
                })
                .collect()
        };
        let (lt, lb) = (layout(&tops), layout(&bottoms));
        let mut cuts: BTreeSet<Q> = BTreeSet::new();
        for (_, a, b) in lt.iter().chain(lb.iter()) {
            cuts.insert(a.clone());
            cuts.insert(b.clone());
        }
        let cuts: Vec<Q> = cuts.into_iter().collect();
        let locate = |l: &[(usize, Q, Q)], x: &Q| l.iter().find(|(_, a, b)| a <= x && x < b).cloned().expect("covered");
        for w in cuts.windows(2) {
            let (ti, ta, _) = locate(&lt, &w[0]);
            let (bi, ba, _) = locate(&lb, &w[0]);
            gluing.push(Identification::Horizontal {
                a: HorizontalSegment { branch: ti, face: Face::Top, from: &w[0] - &ta, to: &w[1] - &ta },
                b: HorizontalSegment { branch: bi, face: Face::Bottom, from: &w[0] - &ba, to: &w[1] - &ba },
            });
        }
        let pieces = (0..n)
            .map(|i| Piece {
                halves: vec![Half { branch: i, side: Flank::Left }, Half { branch: rho[i], side: Flank::Right }],
                end_residues: Vec::new(),
            })
            .collect();
        let t = TrainTrackData { branches, gluing, pieces, min_height };
        if let Ok(t) = t.with_derived_residues() {
            return t;
        }
    }
}
