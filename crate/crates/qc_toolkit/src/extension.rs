use crate::grid::{chart, unchart, Domain, GridMap};
use crate::{CircleMap, QcError};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Composite midpoint rule on `[0, 1]`, with the tolerance for the built-in
/// periodicity self-check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub nodes: usize,
    pub tolerance: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { nodes: 2048, tolerance: 1e-6 }
    }
}

impl Quadrature {
    fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.nodes as f64;
        (0..self.nodes).map(move |k| (k as f64 + 0.5) / n)
    }
}

/// Beurling–Ahlfors extension of the lift at `w = x + iy`, `y ≥ 0`:
/// `½∫₀¹ h̃(x+ty) + h̃(x−ty) dt + i ∫₀¹ h̃(x+ty) − h̃(x−ty) dt`.
pub fn ahlfors_beurling_at(h: &CircleMap, w: Complex64, q: &Quadrature) -> Complex64 {
    let (x, y) = (w.re, w.im);
    if y == 0.0 {
        return Complex64::new(h.eval(x), 0.0);
    }
    let (mut sum, mut diff) = (0.0, 0.0);
    for t in q.nodes() {
        let (a, b) = (h.eval(x + t * y), h.eval(x - t * y));
        sum += a + b;
        diff += a - b;
    }
    let n = q.nodes as f64;
    Complex64::new(0.5 * sum / n, diff / n)
}

/// `c₀ = ∫₀¹ h̃ − 1/2`, the horizontal offset of the extension on the line `y = 1`.
pub fn mean_offset(h: &CircleMap, q: &Quadrature) -> f64 {
    q.nodes().map(|t| h.eval(t)).sum::<f64>() / q.nodes as f64 - 0.5
}

/// `sup_x |F(x + i) − x − i − c₀|` over `samples` equally spaced `x`.
pub fn periodicity_defect(h: &CircleMap, q: &Quadrature, samples: usize) -> f64 {
    let c0 = mean_offset(h, q);
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let x = k as f64 / samples as f64;
            (ahlfors_beurling_at(h, Complex64::new(x, 1.0), q) - Complex64::new(x + c0, 1.0)).norm()
        })
        .reduce(|| 0.0, f64::max)
}

fn checked_offset(h: &CircleMap, q: &Quadrature) -> Result<f64, QcError> {
    let defect = periodicity_defect(h, q, 64);
    if !(defect <= q.tolerance) {
        return Err(QcError::QuadratureFailure { defect, tolerance: q.tolerance });
    }
    Ok(mean_offset(h, q))
}

/// The extension sampled on the strip `[0, 1] × [0, 1]`.
pub fn beurling_ahlfors(h: &CircleMap, q: &Quadrature, n: usize, m: usize) -> Result<GridMap, QcError> {
    checked_offset(h, q)?;
    let domain = Domain::Rectangle { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
    Ok(GridMap::sample(domain, n, m, &|w| ahlfors_beurling_at(h, w, q))?.with_description("Beurling-Ahlfors strip"))
}

/// Self-map of the closed unit disk extending a circle map: the Beurling–Ahlfors
/// extension for `0 ≤ y ≤ 1`, a vertical shear `w + c₀(D − y)/(D − 1)` for
/// `1 ≤ y ≤ D`, and the identity beyond, all read through the cylinder chart.
#[derive(Clone, Debug)]
pub struct IdentityInterpolant {
    h: CircleMap,
    d: f64,
    c0: f64,
    q: Quadrature,
}

impl IdentityInterpolant {
    pub fn new(h: CircleMap, d: f64, q: Quadrature) -> Result<Self, QcError> {
        if !(d > 1.0) || !d.is_finite() {
            return Err(QcError::DTooSmall(d));
        }
        let c0 = checked_offset(&h, &q)?;
        Ok(IdentityInterpolant { h, d, c0, q })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn depth(&self) -> f64 {
        self.d
    }

    pub fn circle_map(&self) -> &CircleMap {
        &self.h
    }

    /// Radius `e^{-2πD}` of the disk on which the map is the identity.
    pub fn identity_radius(&self) -> f64 {
        (-TAU * self.d).exp()
    }

    /// The map in cylinder coordinates, `y ≥ 0`.
    pub fn eval_strip(&self, w: Complex64) -> Complex64 {
        let y = w.im;
        if y >= self.d {
            w
        } else if y > 1.0 {
            w + self.c0 * (self.d - y) / (self.d - 1.0)
        } else {
            ahlfors_beurling_at(&self.h, Complex64::new(w.re, y.max(0.0)), &self.q)
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.norm() <= self.identity_radius() {
            return z;
        }
        let w = unchart(z);
        if w.im >= self.d {
            return z;
        }
        chart(self.eval_strip(Complex64::new(w.re, w.im.max(0.0))))
    }

    /// Samples on `inner ≤ |z| ≤ 1`.
    pub fn grid(&self, n: usize, m: usize, inner: f64) -> Result<GridMap, QcError> {
        let domain = Domain::Annulus { inner, outer: 1.0 };
        Ok(GridMap::sample(domain, n, m, &|z| self.eval(z))?.with_description("identity interpolation on the disk"))
    }
}

/// Samples of [`IdentityInterpolant`] down to radius `e^{-2π(D + 1/2)}`, so that a
/// band of samples lies in the disk where the map is the identity.
pub fn interpolate_identity(h: &CircleMap, d: f64, q: &Quadrature, n: usize, m: usize) -> Result<GridMap, QcError> {
    let f = IdentityInterpolant::new(h.clone(), d, *q)?;
    f.grid(n, m, (-TAU * (d + 0.5)).exp())
}
