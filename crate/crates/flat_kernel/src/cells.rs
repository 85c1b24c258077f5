//! Isometry test for rectilinear surfaces that does not depend on the polygon
//! decomposition: both surfaces are cut into a common grid of congruent cells and
//! the resulting cell complexes are compared.

use crate::geom::{in_sweep, Vec2};
use crate::rational::Q;
use crate::surface::{Corner, EdgeRef, FlatSurface, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

pub const CELL_LIMIT: usize = 250_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellError {
    #[error("edge {0} is neither horizontal nor vertical")]
    NotRectilinear(EdgeRef),
    #[error("grid refinement needs {found} cells, above the bound {limit}")]
    CellLimitExceeded { found: usize, limit: usize },
}

const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn flip(sign: Sign, d: usize) -> usize {
    match sign {
        Sign::Plus => d,
        Sign::Minus => (d + 2) % 4,
    }
}

struct Grid {
    dx: Q,
    dy: Q,
}

/// One surface cut into grid cells. `next[c][d] = (cell, sign)` is the neighbour
/// across side `d` and the sign relating the two polygon frames.
struct CellComplex {
    centers: Vec<(usize, Vec2)>,
    next: Vec<[(usize, Sign); 4]>,
}

fn rational_gcd(xs: impl Iterator<Item = Q>) -> Option<Q> {
    let xs: Vec<Q> = xs.filter(|x| !x.is_zero()).map(|x| x.abs()).collect();
    if xs.is_empty() {
        return None;
    }
    let den = xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let g = xs
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .fold(BigInt::zero(), |g, n| g.gcd(&n));
    Some(Q::new(g, den))
}

fn grid_for(surfaces: &[&FlatSurface]) -> Result<Grid, CellError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in surfaces {
        for e in s.edge_refs() {
            let v = s.polygon(e.poly).edge_vector(e.edge);
            if !v.x.is_zero() && !v.y.is_zero() {
                return Err(CellError::NotRectilinear(e));
            }
        }
        for p in s.polygons() {
            let o = p.vertex(0);
            for w in &p.vertices {
                xs.push(&w.x - &o.x);
                ys.push(&w.y - &o.y);
            }
        }
    }
    Ok(Grid {
        dx: rational_gcd(xs.into_iter()).expect("polygons have width"),
        dy: rational_gcd(ys.into_iter()).expect("polygons have height"),
    })
}

fn inside(p: &crate::surface::Polygon, z: &Vec2) -> bool {
    let n = p.len();
    let mut crossings = 0;
    for e in 0..n {
        let (a, b) = (p.edge_start(e), p.edge_end(e));
        if a.x == b.x && a.x > z.x && ((a.y < z.y) != (b.y < z.y)) {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

fn on_segment(a: &Vec2, b: &Vec2, z: &Vec2) -> bool {
    let between = |s: &Q, t: &Q, u: &Q| (s <= u && u <= t) || (t <= u && u <= s);
    (b - a).cross(&(z - a)).is_zero() && between(&a.x, &b.x, &z.x) && between(&a.y, &b.y, &z.y)
}

fn floor_div(x: &Q, d: &Q) -> i64 {
    let r = x / d;
    let f = r.floor();
    i64::try_from(f.to_integer()).expect("grid index fits")
}

impl CellComplex {
    fn build(s: &FlatSurface, g: &Grid, limit: usize) -> Result<Self, CellError> {
        let half = Vec2::new(&g.dx / Q::from_integer(2.into()), &g.dy / Q::from_integer(2.into()));
        let mut centers = Vec::new();
        let mut index: HashMap<(usize, i64, i64), usize> = HashMap::new();
        for (pi, p) in s.polygons().iter().enumerate() {
            let o = p.vertex(0);
            let (mut i0, mut i1, mut j0, mut j1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
            for w in &p.vertices {
                let i = floor_div(&(&w.x - &o.x), &g.dx);
                let j = floor_div(&(&w.y - &o.y), &g.dy);
                i0 = i0.min(i);
                i1 = i1.max(i);
                j0 = j0.min(j);
                j1 = j1.max(j);
            }
            for i in i0..i1 {
                for j in j0..j1 {
                    let c = Vec2::new(
                        &o.x + &g.dx * Q::from_integer(i.into()) + &half.x,
                        &o.y + &g.dy * Q::from_integer(j.into()) + &half.y,
                    );
                    if inside(p, &c) {
                        index.insert((pi, i, j), centers.len());
                        centers.push((pi, c));
                        if centers.len() > limit {
                            return Err(CellError::CellLimitExceeded { found: centers.len(), limit });
                        }
                    }
                }
            }
        }
        let locate = |pi: usize, z: &Vec2| -> usize {
            let o = s.polygon(pi).vertex(0);
            let i = floor_div(&(&z.x - &o.x), &g.dx);
            let j = floor_div(&(&z.y - &o.y), &g.dy);
            index[&(pi, i, j)]
        };
        let mut next = Vec::with_capacity(centers.len());
        for (pi, c) in &centers {
            let p = s.polygon(*pi);
            let mut row = [(0usize, Sign::Plus); 4];
            for (d, &(ux, uy)) in DIRS.iter().enumerate() {
                let step = Vec2::new(&half.x * Q::from_integer(ux.into()), &half.y * Q::from_integer(uy.into()));
                let mid = c + &step;
                let beyond = &mid + &step;
                row[d] = if inside(p, &beyond) {
                    (locate(*pi, &beyond), Sign::Plus)
                } else {
                    let e = (0..p.len())
                        .find(|&e| on_segment(p.edge_start(e), p.edge_end(e), &mid))
                        .expect("cell side lies on an edge");
                    let link = s.link(EdgeRef::new(*pi, e));
                    let there = link.map.apply(&mid);
                    let across = &there + &link.map.sign.apply(&step);
                    (locate(link.to.poly, &across), link.map.sign)
                };
            }
            next.push(row);
        }
        Ok(CellComplex { centers, next })
    }

    /// Cells touching corner `c` from inside its sweep, with the quadrant used.
    fn corner_cells(&self, s: &FlatSurface, g: &Grid, c: Corner) -> Vec<(usize, (i64, i64))> {
        let p = s.polygon(c.poly);
        let v = p.vertex(c.vertex);
        let (u, w) = s.corner_rays(c);
        let mut out = Vec::new();
        for qd in [(1i64, 1i64), (-1, 1), (-1, -1), (1, -1)] {
            let d = Vec2::new(Q::from_integer(qd.0.into()), Q::from_integer(qd.1.into()));
            if !in_sweep(&u, &w, &d) {
                continue;
            }
            let z = Vec2::new(
                &v.x + &g.dx * Q::new(qd.0.into(), 2.into()),
                &v.y + &g.dy * Q::new(qd.1.into(), 2.into()),
            );
            if let Some(k) = self.centers.iter().position(|(pi, cz)| *pi == c.poly && *cz == z) {
                out.push((k, qd));
            }
        }
        out
    }
}

fn propagate(a: &CellComplex, b: &CellComplex, seed_a: usize, seed_b: usize, sign: Sign) -> bool {
    let n = a.centers.len();
    let mut image: Vec<Option<(usize, Sign)>> = vec![None; n];
    let mut used = vec![false; n];
    image[seed_a] = Some((seed_b, sign));
    used[seed_b] = true;
    let mut queue = VecDeque::from([seed_a]);
    while let Some(x) = queue.pop_front() {
        let (y, tau) = image[x].expect("mapped");
        for d in 0..4 {
            let (x2, eps_a) = a.next[x][d];
            let (y2, eps_b) = b.next[y][flip(tau, d)];
            let want = (y2, eps_b.compose(tau).compose(eps_a));
            match image[x2] {
                Some(have) if have != want => return false,
                Some(_) => {}
                None => {
                    if used[y2] {
                        return false;
                    }
                    used[y2] = true;
                    image[x2] = Some(want);
                    queue.push_back(x2);
                }
            }
        }
    }
    true
}

/// Isometry of surfaces whose edges are all horizontal or vertical, independent of
/// how they are cut into polygons. Both surfaces are refined to the coarsest common
/// grid through their polygon vertices; an isometry is searched among maps sending
/// a cell at a most singular vertex of `s1` to a cell at a vertex of equal angle of
/// `s2`. Markings are ignored. Without cone points the search is anchored at
/// polygon vertices, so flat tori differing by a sub-grid shift are not detected.
pub fn isometric_rectilinear(s1: &FlatSurface, s2: &FlatSurface, limit: usize) -> Result<bool, CellError> {
    let g = grid_for(&[s1, s2])?;
    if s1.area() != s2.area() {
        return Ok(false);
    }
    let a = CellComplex::build(s1, &g, limit)?;
    let b = CellComplex::build(s2, &g, limit)?;
    if a.centers.len() != b.centers.len() {
        return Ok(false);
    }
    let angle = |s: &FlatSurface, c: Corner| s.vertex_classes()[s.class_of(c)].angle_pi;
    let corners = |s: &FlatSurface| -> Vec<Corner> {
        s.polygons()
            .iter()
            .enumerate()
            .flat_map(|(p, poly)| (0..poly.len()).map(move |v| Corner::new(p, v)))
            .collect()
    };
    let c1 = corners(s1);
    let top = c1.iter().map(|&c| angle(s1, c)).max().expect("nonempty");
    let seed_corner = *c1.iter().find(|&&c| angle(s1, c) == top).expect("max attained");
    let (seed, quadrant) = a.corner_cells(s1, &g, seed_corner)[0];
    for c in corners(s2).into_iter().filter(|&c| angle(s2, c) == top) {
        for (k, qd) in b.corner_cells(s2, &g, c) {
            let sign = if qd == quadrant {
                Sign::Plus
            } else if qd == (-quadrant.0, -quadrant.1) {
                Sign::Minus
            } else {
                continue;
            };
            if propagate(&a, &b, seed, k, sign) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
