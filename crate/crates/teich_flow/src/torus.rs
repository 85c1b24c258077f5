//! Flat tori as marked lattices, their moduli in the upper half-plane, and the
//! Teichmüller distance between them.

use flat_kernel::{FlatSurface, HalfTranslation, Sign, Vec2, Q};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("modulus {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("surface has genus {0}, not 1")]
    NotATorus(u32),
    #[error("gluings do not develop to a translation structure")]
    NotTranslation,
    #[error("periods span a degenerate lattice")]
    DegenerateLattice,
}

/// A point `τ` of the upper half-plane: the torus `ℂ / (ℤ + τℤ)` with its marking.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    pub tau: Complex64,
}

impl TorusPoint {
    pub fn new(tau: Complex64) -> Result<Self, TorusError> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(TorusError::NotInUpperHalfPlane(tau));
        }
        Ok(TorusPoint { tau })
    }

    /// Representative in the standard fundamental domain of SL(2, ℤ)
    /// (forgets the marking).
    pub fn reduced(&self) -> TorusPoint {
        let mut t = self.tau;
        for _ in 0..10_000 {
            t.re -= t.re.round();
            if t.norm_sqr() < 1.0 - 1e-15 {
                t = -1.0 / t;
            } else {
                break;
            }
        }
        TorusPoint { tau: t }
    }
}

/// Teichmüller distance on the torus: half the hyperbolic distance in the upper half-plane.
pub fn torus_teich_distance(a: &TorusPoint, b: &TorusPoint) -> f64 {
    let num = (a.tau - b.tau).norm();
    (num / (2.0 * (a.tau.im * b.tau.im).sqrt())).asinh()
}

/// A marked lattice `w1 ℤ + w2 ℤ` with positively oriented basis, in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatTorus {
    pub w1: Complex64,
    pub w2: Complex64,
}

impl FlatTorus {
    pub fn from_modulus(tau: &TorusPoint) -> Self {
        FlatTorus { w1: Complex64::new(1.0, 0.0), w2: tau.tau }
    }

    pub fn modulus(&self) -> Result<TorusPoint, TorusError> {
        TorusPoint::new(self.w2 / self.w1)
    }

    pub fn area(&self) -> f64 {
        (self.w1.conj() * self.w2).im
    }

    /// The lattice point `a·w1 + b·w2`.
    pub fn point(&self, a: i64, b: i64) -> Complex64 {
        self.w1 * a as f64 + self.w2 * b as f64
    }

    /// Applies the real-linear map stretching the direction orthogonal to `dir` by `k`
    /// and fixing `dir`.
    pub fn stretch_normal(&self, dir: Complex64, k: f64) -> FlatTorus {
        let u = dir / dir.norm();
        let f = |z: Complex64| {
            let w = z * u.conj();
            Complex64::new(w.re, k * w.im) * u
        };
        FlatTorus { w1: f(self.w1), w2: f(self.w2) }
    }
}

/// A marked lattice with exact rational periods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLattice {
    pub w1: Vec2,
    pub w2: Vec2,
}

impl ExactLattice {
    /// Periods of a genus-1 flat surface: develop every polygon into one chart and read
    /// off the deck translations across all gluings. Polygon 0 fixes the chart.
    pub fn of_surface(s: &FlatSurface) -> Result<ExactLattice, TorusError> {
        if s.genus() != 1 {
            return Err(TorusError::NotATorus(s.genus()));
        }
        let n = s.polygons().len();
        let mut place: Vec<Option<HalfTranslation>> = vec![None; n];
        place[0] = Some(HalfTranslation::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            let pp = place[p].clone().expect("placed");
            for e in 0..s.polygon(p).len() {
                let link = s.link(flat_kernel::EdgeRef::new(p, e));
                let q = link.to.poly;
                if place[q].is_none() {
                    place[q] = Some(pp.after(&link.map.inverse()));
                    queue.push_back(q);
                }
            }
        }
        let mut periods = Vec::new();
        for e in s.edge_refs() {
            let link = s.link(e);
            let pp = place[e.poly].as_ref().expect("connected");
            let pq = place[link.to.poly].as_ref().expect("connected");
            let deck = pq.after(&link.map).after(&pp.inverse());
            if deck.sign != Sign::Plus {
                return Err(TorusError::NotTranslation);
            }
            if !deck.offset.is_zero() {
                periods.push(deck.offset);
            }
        }
        lattice_basis(&periods).ok_or(TorusError::DegenerateLattice)
    }

    pub fn to_float(&self) -> FlatTorus {
        let c = |v: &Vec2| {
            let (x, y) = v.to_f64();
            Complex64::new(x, y)
        };
        FlatTorus { w1: c(&self.w1), w2: c(&self.w2) }
    }

    pub fn area(&self) -> Q {
        self.w1.cross(&self.w2)
    }

    /// Integer coordinates of `v` in this basis, if `v` is a lattice vector.
    pub fn coordinates(&self, v: &Vec2) -> Option<(BigInt, BigInt)> {
        let det = self.area();
        let a = v.cross(&self.w2) / &det;
        let b = self.w1.cross(v) / &det;
        (a.is_integer() && b.is_integer()).then(|| (a.to_integer(), b.to_integer()))
    }

    /// Same subgroup of ℝ², ignoring the choice of basis.
    pub fn same_lattice(&self, other: &ExactLattice) -> bool {
        self.coordinates(&other.w1).is_some()
            && self.coordinates(&other.w2).is_some()
            && other.coordinates(&self.w1).is_some()
            && other.coordinates(&self.w2).is_some()
    }
}

/// Basis of the subgroup generated by rational vectors spanning a rank-2 lattice,
/// oriented counterclockwise.
pub fn lattice_basis(vs: &[Vec2]) -> Option<ExactLattice> {
    let u1 = vs.iter().find(|v| !v.is_zero())?.clone();
    let u2 = vs.iter().find(|v| !u1.cross(v).is_zero())?.clone();
    let det = u1.cross(&u2);
    let coords: Vec<(Q, Q)> = vs.iter().map(|v| (v.cross(&u2) / &det, u1.cross(v) / &det)).collect();
    let d = coords
        .iter()
        .fold(BigInt::from(1), |acc, (a, b)| acc.lcm(a.denom()).lcm(b.denom()));
    let ints: Vec<(BigInt, BigInt)> = coords
        .iter()
        .map(|(a, b)| ((a * Q::from_integer(d.clone())).to_integer(), (b * Q::from_integer(d.clone())).to_integer()))
        .collect();
    let (p, h) = integer_basis(&ints);
    let to_vec = |(a, b): &(BigInt, BigInt)| {
        let a = Q::new(a.clone(), d.clone());
        let b = Q::new(b.clone(), d.clone());
        &(&u1 * &a) + &(&u2 * &b)
    };
    let w1 = to_vec(&p);
    let mut w2 = to_vec(&(BigInt::zero(), h));
    if w1.cross(&w2).is_negative() {
        w2 = -&w2;
    }
    Some(ExactLattice { w1, w2 })
}

/// Hermite-style basis `(pivot, (0, h))` of the subgroup of ℤ² generated by `vs`.
fn integer_basis(vs: &[(BigInt, BigInt)]) -> ((BigInt, BigInt), BigInt) {
    let mut pivot = (BigInt::zero(), BigInt::zero());
    let mut h = BigInt::zero();
    for v in vs {
        if pivot.0.is_zero() && v.0.is_zero() {
            h = h.gcd(&v.1);
            continue;
        }
        let eg = pivot.0.extended_gcd(&v.0);
        let g = eg.gcd;
        let new_pivot = (&eg.x * &pivot.0 + &eg.y * &v.0, &eg.x * &pivot.1 + &eg.y * &v.1);
        let rem = (&v.0 / &g) * &pivot.1 - (&pivot.0 / &g) * &v.1;
        h = h.gcd(&rem);
        pivot = new_pivot;
    }
    if !h.is_zero() {
        pivot.1 = pivot.1.mod_floor(&h);
    }
    (pivot, h)
}
