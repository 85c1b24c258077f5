//! Decomposition-level isometry test by propagation from one seed polygon.

use crate::geom::Vec2;
use crate::surface::{EdgeRef, FlatSurface, Sign};
use thiserror::Error;

/// Default polygon-count cap for the exhaustive search.
pub const ISOMETRY_POLYGON_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsometryError {
    #[error("surface has {found} polygons, above the search bound {limit}")]
    SizeLimitExceeded { found: usize, limit: usize },
}

/// Where polygon `p` of the first surface goes: target polygon, vertex offset, sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Placement {
    target: usize,
    offset: usize,
    sign: Sign,
}

pub fn isometric(s1: &FlatSurface, s2: &FlatSurface) -> Result<bool, IsometryError> {
    isometric_with_limit(s1, s2, ISOMETRY_POLYGON_LIMIT)
}

/// True iff some relabeling of polygons and edges together with per-polygon maps
/// `z ↦ ±z + c` carries every gluing and every marking of `s1` onto `s2`.
pub fn isometric_with_limit(s1: &FlatSurface, s2: &FlatSurface, limit: usize) -> Result<bool, IsometryError> {
    for s in [s1, s2] {
        if s.polygons().len() > limit {
            return Err(IsometryError::SizeLimitExceeded { found: s.polygons().len(), limit });
        }
    }
    if s1.polygons().len() != s2.polygons().len()
        || s1.gluings().len() != s2.gluings().len()
        || s1.area() != s2.area()
    {
        return Ok(false);
    }
    let p0 = s1.polygon(0);
    for target in 0..s2.polygons().len() {
        if s2.polygon(target).len() != p0.len() {
            continue;
        }
        for offset in 0..p0.len() {
            for sign in [Sign::Plus, Sign::Minus] {
                let seed = Placement { target, offset, sign };
                if propagate(s1, s2, seed) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

fn shapes_match(s1: &FlatSurface, s2: &FlatSurface, p: usize, pl: Placement) -> bool {
    let a = s1.polygon(p);
    let b = s2.polygon(pl.target);
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    let a0 = a.vertex(0);
    let b0 = b.vertex(pl.offset);
    (0..n).all(|i| {
        let da: Vec2 = a.vertex(i) - a0;
        let db: Vec2 = b.vertex(i + pl.offset) - b0;
        pl.sign.apply(&da) == db
    })
}

fn propagate(s1: &FlatSurface, s2: &FlatSurface, seed: Placement) -> bool {
    let n = s1.polygons().len();
    let mut place: Vec<Option<Placement>> = vec![None; n];
    let mut used = vec![false; n];
    place[0] = Some(seed);
    used[seed.target] = true;
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        let pl = place[p].expect("placed");
        if !shapes_match(s1, s2, p, pl) {
            return false;
        }
        let m = s1.polygon(p).len();
        for e in 0..m {
            let l1 = s1.link(EdgeRef::new(p, e));
            let e2 = EdgeRef::new(pl.target, (e + pl.offset) % m);
            if s1.edge_label(EdgeRef::new(p, e)) != s2.edge_label(e2) {
                return false;
            }
            let l2 = s2.link(e2);
            let q = l1.to.poly;
            let mq = s1.polygon(q).len();
            if s2.polygon(l2.to.poly).len() != mq {
                return false;
            }
            // Sign of the placement of q: s2-link ∘ placement(p) ∘ s1-link⁻¹.
            let sign = l2.map.sign.compose(pl.sign).compose(l1.map.sign);
            let offset = (l2.to.edge + mq - l1.to.edge) % mq;
            let want = Placement { target: l2.to.poly, offset, sign };
            match place[q] {
                Some(existing) => {
                    if existing != want {
                        return false;
                    }
                }
                None => {
                    if used[want.target] {
                        return false;
                    }
                    used[want.target] = true;
                    place[q] = Some(want);
                    stack.push(q);
                }
            }
        }
    }
    // Vertex markings: labels must agree corner by corner.
    let label_at = |s: &FlatSurface, c: crate::surface::Corner| -> Option<String> {
        s.marking().vertices.iter().find(|(mc, _)| *mc == c).map(|(_, l)| l.clone())
    };
    for (c, l) in &s1.marking().vertices {
        let pl = place[c.poly].expect("connected");
        let m = s1.polygon(c.poly).len();
        let c2 = crate::surface::Corner::new(pl.target, (c.vertex + pl.offset) % m);
        if label_at(s2, c2).as_deref() != Some(l.as_str()) {
            return false;
        }
    }
    s1.marking().vertices.len() == s2.marking().vertices.len() && s1.marking().edges.len() == s2.marking().edges.len()
}
