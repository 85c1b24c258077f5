use crate::GraftError;
use num_complex::Complex64;
use num_integer::Integer;
use teich_flow::{FlatTorus, TorusPoint};

/// The simple closed curve in the class `p·w1 + q·w2` of a marked lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimpleCurve {
    p: i64,
    q: i64,
}

impl SimpleCurve {
    pub fn new(p: i64, q: i64) -> Result<Self, GraftError> {
        if p.gcd(&q) != 1 {
            return Err(GraftError::NotPrimitive(p, q));
        }
        Ok(SimpleCurve { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

/// Inserts a flat cylinder of width `t` along the geodesic representative of `c`.
/// A period crossing the curve `k` times (signed) gains `k·t` times the unit normal
/// of the curve; the basis stays positively oriented.
pub fn graft_lattice(l: &FlatTorus, c: SimpleCurve, t: f64) -> Result<FlatTorus, GraftError> {
    if !(t >= 0.0) {
        return Err(GraftError::NegativeWidth(t.to_string()));
    }
    let gamma = l.point(c.p, c.q);
    let normal = Complex64::i() * gamma / gamma.norm();
    Ok(FlatTorus { w1: l.w1 - normal * (c.q as f64 * t), w2: l.w2 + normal * (c.p as f64 * t) })
}

/// Modulus of `ℂ/(ℤ + τℤ)` grafted along `c` for time `t`, with the marking carried along.
pub fn graft_torus(tau: &TorusPoint, c: SimpleCurve, t: f64) -> Result<TorusPoint, GraftError> {
    let l = graft_lattice(&FlatTorus::from_modulus(tau), c, t)?;
    Ok(l.modulus().expect("grafting keeps the orientation"))
}
