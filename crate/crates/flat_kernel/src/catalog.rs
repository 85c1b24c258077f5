//! Named constructions used by tests, experiments and the CLI.

use crate::geom::Vec2;
use crate::rational::{one, q, qi, zero, Q};
use crate::surface::{Corner, EdgeRef, FlatSurface, Gluing, Marking, Polygon, SurfaceError};

fn pt(x: &Q, y: &Q) -> Vec2 {
    Vec2::new(x.clone(), y.clone())
}

/// `[0, w] × [0, h]` with opposite sides glued by translation.
pub fn rectangle_torus(w: &Q, h: &Q) -> FlatSurface {
    let r = Polygon::rectangle(&zero(), &zero(), w, h);
    let g = vec![
        Gluing::translation(EdgeRef::new(0, 0), EdgeRef::new(0, 2)),
        Gluing::translation(EdgeRef::new(0, 1), EdgeRef::new(0, 3)),
    ];
    FlatSurface::new(vec![r], g, Marking::default()).expect("rectangle torus")
}

pub fn square_torus() -> FlatSurface {
    rectangle_torus(&one(), &one())
}

/// Square torus whose corner is a distinguished point, so the vertical side through
/// it is a closed vertical curve of length 1 through a marked vertex.
pub fn marked_square_torus() -> FlatSurface {
    let s = square_torus();
    let marking = Marking { edges: Vec::new(), vertices: vec![(Corner::new(0, 0), "p".to_string())] };
    s.with_marking(marking).expect("marking")
}

/// A torus with a vertical slit whose two banks are cut into pieces and reglued by
/// an interval exchange.
#[derive(Clone, Debug)]
pub struct SlitTorus {
    /// The torus is ℂ modulo the lattice spanned by (1, 0) and (shear, 1).
    pub shear: Q,
    /// Slit foot.
    pub x0: Q,
    pub y0: Q,
    /// Lengths of the left-bank pieces from bottom to top.
    pub pieces: Vec<Q>,
    /// Left piece `k` is glued to right piece `perm[k]` (right pieces counted bottom to top).
    pub perm: Vec<usize>,
}

impl SlitTorus {
    /// Slit of length 1/2 cut in three pieces reglued by the reversing permutation:
    /// two cone points of angle 4π.
    pub fn theta() -> Self {
        SlitTorus {
            shear: q(1, 211),
            x0: q(1, 2),
            y0: q(1, 4),
            pieces: vec![q(1, 8), q(1, 4), q(1, 8)],
            perm: vec![2, 1, 0],
        }
    }

    /// Slit of length 1/2 cut in two pieces that are swapped: one cone point of angle 6π.
    pub fn two_interval() -> Self {
        SlitTorus {
            shear: q(1, 211),
            x0: q(1, 2),
            y0: q(1, 4),
            pieces: vec![q(1, 5), q(3, 10)],
            perm: vec![1, 0],
        }
    }

    pub fn slit_length(&self) -> Q {
        self.pieces.iter().fold(zero(), |a, b| a + b)
    }

    pub fn build(&self) -> Result<FlatSurface, SurfaceError> {
        let a = &self.shear;
        let x0 = &self.x0;
        let y0 = &self.y0;
        let k = self.pieces.len();
        let y1 = y0 + self.slit_length();
        // Left polygon: bottom in two parts, right side up through the slit, top, slanted side.
        let mut left = vec![pt(&zero(), &zero()), pt(&(x0 - a), &zero()), pt(x0, &zero()), pt(x0, y0)];
        let mut y = y0.clone();
        for l in &self.pieces {
            y = &y + l;
            left.push(pt(x0, &y));
        }
        left.push(pt(x0, &one()));
        left.push(pt(a, &one()));
        // Right pieces in bottom-to-top order.
        let mut right_len = vec![zero(); k];
        for (i, &j) in self.perm.iter().enumerate() {
            right_len[j] = self.pieces[i].clone();
        }
        let one_q = one();
        let mut right = vec![
            pt(x0, &zero()),
            pt(&one_q, &zero()),
            pt(&(&one_q + a), &one_q),
            pt(&(x0 + a), &one_q),
            pt(x0, &one_q),
            pt(x0, &y1),
        ];
        let mut y = y1.clone();
        for l in right_len.iter().rev() {
            y = &y - l;
            if y != *y0 {
                right.push(pt(x0, &y));
            }
        }
        right.push(pt(x0, y0));
        let nl = left.len();
        let nr = right.len();
        let e = EdgeRef::new;
        let mut g = vec![
            Gluing::translation(e(0, 0), e(0, nl - 2)),
            Gluing::translation(e(0, 1), e(1, 3)),
            Gluing::translation(e(1, 0), e(1, 2)),
            Gluing::translation(e(0, nl - 1), e(1, 1)),
            Gluing::translation(e(0, 2), e(1, nr - 1)),
            Gluing::translation(e(0, 3 + k), e(1, 4)),
        ];
        // Left bank edge 3+i is piece i; right bank edges run top to bottom starting at index 5.
        for (i, &j) in self.perm.iter().enumerate() {
            let right_edge = 5 + (k - 1 - j);
            g.push(Gluing::translation(e(0, 3 + i), e(1, right_edge)));
        }
        FlatSurface::new(vec![Polygon::new(left), Polygon::new(right)], g, Marking::default())
    }
}

/// The two-cone-point slit torus.
pub fn slit_torus() -> FlatSurface {
    SlitTorus::theta().build().expect("slit torus")
}

/// Three `2 × 1` rectangles, each with its horizontal sides cut at the midpoint,
/// glued as a threefold cover of the pillowcase: top halves by rotations following
/// `alpha`, bottom halves following `beta`, vertical sides by translations following `gamma`.
pub fn pillowcase_cover(alpha: [usize; 3], beta: [usize; 3], gamma: [usize; 3]) -> Result<FlatSurface, SurfaceError> {
    let (z, o, t) = (zero(), one(), qi(2));
    let rect = Polygon::new(vec![pt(&z, &z), pt(&o, &z), pt(&t, &z), pt(&t, &o), pt(&o, &o), pt(&z, &o)]);
    let e = EdgeRef::new;
    let mut g = Vec::new();
    for i in 0..3 {
        g.push(Gluing::rotation(e(i, 4), e(alpha[i], 3)));
        g.push(Gluing::rotation(e(i, 0), e(beta[i], 1)));
        g.push(Gluing::translation(e(i, 2), e(gamma[i], 5)));
    }
    FlatSurface::new(vec![rect.clone(), rect.clone(), rect], g, Marking::default())
}

/// Genus-2 surface with four simple zeros: a pillowcase cover sheared by
/// `x ↦ x + 37y/n`. Holonomies of the unsheared cover are integral, so when
/// `gcd(37, n) = 1` every vertical saddle connection has length at least `n`.
pub fn generic_four_zero_surface(n: i64) -> FlatSurface {
    let base = pillowcase_cover([1, 2, 0], [1, 2, 0], [0, 1, 2]).expect("pillowcase cover");
    base.map_linear(&one(), &q(37, n), &zero(), &one()).expect("shear")
}

/// One vertical cylinder `[0, w] × [0, h]`: top and bottom glued by
/// translation, the vertical sides each cut into three segments and glued in reverse
/// order. A single cone point of angle 6π; every vertical leaf is closed.
pub fn one_cylinder_surface(w: &Q, h: &Q, right_pieces: [Q; 3]) -> Result<FlatSurface, SurfaceError> {
    let z = zero();
    let [r1, r2, r3] = right_pieces;
    let c1 = r1.clone();
    let c2 = &r1 + &r2;
    // Left pieces bottom to top are r3, r2, r1.
    let d1 = r3.clone();
    let d2 = &r3 + &r2;
    let poly = Polygon::new(vec![
        pt(&z, &z),
        pt(w, &z),
        pt(w, &c1),
        pt(w, &c2),
        pt(w, h),
        pt(&z, h),
        pt(&z, &d2),
        pt(&z, &d1),
    ]);
    let e = |i| EdgeRef::new(0, i);
    let g = vec![
        Gluing::translation(e(0), e(4)),
        Gluing::translation(e(1), e(5)),
        Gluing::translation(e(2), e(6)),
        Gluing::translation(e(3), e(7)),
    ];
    FlatSurface::new(vec![poly], g, Marking::default())
}
