use crate::annulus::angular_trace;
use crate::extension::{IdentityInterpolant, Quadrature};
use crate::grid::{dilatation, DilatationReport, Domain, GridMap, PlaneMap};
use crate::QcError;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// A holomorphic map that also evaluates its derivative.
pub trait ConformalMap: PlaneMap {
    fn derivative(&self, z: Complex64) -> Complex64;
}

/// A holomorphic map given by closures for the map and its derivative.
pub struct Holomorphic<F, D> {
    pub map: F,
    pub derivative: D,
}

impl<F, D> PlaneMap for Holomorphic<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.map)(z)
    }
}

impl<F, D> ConformalMap for Holomorphic<F, D>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn derivative(&self, z: Complex64) -> Complex64 {
        (self.derivative)(z)
    }
}

fn check_normalized(g: &dyn ConformalMap) -> Result<(), QcError> {
    let g0 = g.eval(Complex64::new(0.0, 0.0));
    if g0.norm() > 1e-12 {
        return Err(QcError::NotFixingOrigin(g0.to_string()));
    }
    let d = g.derivative(Complex64::new(0.0, 0.0));
    if (d - 1.0).norm() > 1e-9 {
        return Err(QcError::DerivativeNotNormalized(d.to_string()));
    }
    Ok(())
}

/// Linear interpolation of samples at `k/n` of a function of period 1.
fn periodic_interp(samples: &[f64], x: f64) -> f64 {
    let n = samples.len();
    let t = x.rem_euclid(1.0) * n as f64;
    let k = (t.floor() as usize).min(n - 1);
    let frac = t - k as f64;
    samples[k] + frac * (samples[(k + 1) % n] - samples[k])
}

/// Weight rising from 0 at radius `a` to 1 at radius `b`, linear in `ln |z|`.
fn log_ramp(rad: f64, a: f64, b: f64) -> f64 {
    if rad <= a {
        0.0
    } else if rad >= b {
        1.0
    } else {
        (rad / a).ln() / (b / a).ln()
    }
}

/// `z + χ(|z|)(g(z) − z)` on `B_r`, with `χ` rising from 0 on `B_s` to 1 on `∂B_r`
/// linearly in `ln |z|`: the identity near the origin and `g` on the outer circle.
pub struct FixedNearZero<'a> {
    g: &'a dyn ConformalMap,
    r: f64,
    s: f64,
}

impl FixedNearZero<'_> {
    pub fn identity_radius(&self) -> f64 {
        self.s
    }

    pub fn radius(&self) -> f64 {
        self.r
    }
}

impl PlaneMap for FixedNearZero<'_> {
    fn eval(&self, z: Complex64) -> Complex64 {
        let rad = z.norm();
        if rad <= self.s {
            return z;
        }
        if rad >= self.r {
            return self.g.eval(z);
        }
        z + (self.g.eval(z) - z) * log_ramp(rad, self.s, self.r)
    }
}

/// `collar` is the modulus of the annulus `s < |z| < r` over which `g` is blended away.
pub fn fix_near_zero(g: &dyn ConformalMap, r: f64, collar: f64) -> Result<FixedNearZero<'_>, QcError> {
    check_normalized(g)?;
    Ok(FixedNearZero { g, r, s: r * (-TAU * collar).exp() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationConfig {
    /// Modulus of the collar on which `g` is blended to the identity.
    pub collar: f64,
    /// Depth of the identity interpolation that straightens the boundary of `f`.
    pub depth: f64,
    /// Modulus of the collar on which the image of `f` is made round.
    pub rounding_collar: f64,
    pub trace_samples: usize,
    pub quadrature: Quadrature,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        InterpolationConfig { collar: 1.0, depth: 2.0, rounding_collar: 1.0, trace_samples: 2048, quadrature: Quadrature::default() }
    }
}

/// A map on `B_r` equal to `f` on `B_{r'}` and to `g` on `∂B_r`.
///
/// Outside `B_s` it is [`fix_near_zero`] applied to `g`. Inside, it is the rescaled
/// `f_s(ζ) = f(sζ)/s` followed by a radial rounding of its image onto the unit disk
/// and by the identity interpolation of the inverse boundary trace, which returns the
/// boundary to itself; rescaled back, this is the identity on `∂B_s`.
pub struct ConformalInterpolation<'a> {
    f: &'a dyn PlaneMap,
    outer: FixedNearZero<'a>,
    radial: Vec<f64>,
    round_inner: f64,
    round_outer: f64,
    correction: IdentityInterpolant,
    untouched: f64,
    inner_radius: f64,
}

impl ConformalInterpolation<'_> {
    /// `r'`: on `B_{r'}` the map is `f`.
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    /// `s`: the radius where the two halves meet.
    pub fn seam_radius(&self) -> f64 {
        self.outer.s
    }

    pub fn radius(&self) -> f64 {
        self.outer.r
    }

    fn round(&self, w: Complex64) -> Complex64 {
        let rad = w.norm();
        let chi = log_ramp(rad, self.round_inner, self.round_outer);
        if chi == 0.0 {
            return w;
        }
        let rho = periodic_interp(&self.radial, w.arg() / TAU);
        w * rho.powf(-chi)
    }

    /// Samples on `r'/2 ≤ |z| ≤ r` with their dilatation.
    pub fn sample(&self, n: usize, m: usize) -> Result<(GridMap, DilatationReport), QcError> {
        let domain = Domain::Annulus { inner: 0.5 * self.inner_radius, outer: self.outer.r };
        let map = GridMap::sample(domain, n, m, self)?.with_description("conformal interpolation");
        let report = dilatation(&map)?;
        Ok((map, report))
    }
}

impl PlaneMap for ConformalInterpolation<'_> {
    fn eval(&self, z: Complex64) -> Complex64 {
        let s = self.outer.s;
        if z.norm() > s {
            return self.outer.eval(z);
        }
        let fz = self.f.eval(z);
        let w = fz / s;
        if w.norm() <= self.untouched {
            return fz;
        }
        self.correction.eval(self.round(w)) * s
    }
}

pub fn interpolate_with_conformal<'a>(
    f: &'a dyn PlaneMap,
    g: &'a dyn ConformalMap,
    r: f64,
    cfg: &InterpolationConfig,
) -> Result<ConformalInterpolation<'a>, QcError> {
    let zero = Complex64::new(0.0, 0.0);
    if f.eval(zero).norm() > 1e-12 {
        return Err(QcError::NotFixingOrigin(f.eval(zero).to_string()));
    }
    let outer = fix_near_zero(g, r, cfg.collar)?;
    let s = outer.s;
    let fs = |z: Complex64| f.eval(z * s) / s;
    let n = cfg.trace_samples;
    let trace = angular_trace(&fs, 1.0, n).map_err(|_| QcError::NotStarShaped)?;
    let back = trace.inverse();
    // Radius of the image curve as a function of its angle.
    let radial: Vec<f64> =
        (0..n).map(|k| fs(Complex64::from_polar(1.0, TAU * back.eval(k as f64 / n as f64))).norm()).collect();
    let min_rho = radial.iter().cloned().fold(f64::MAX, f64::min);
    let round_outer = 0.5 * min_rho;
    let round_inner = round_outer * (-TAU * cfg.rounding_collar).exp();
    let correction = IdentityInterpolant::new(back, cfg.depth, cfg.quadrature)?;
    let untouched = round_inner.min(correction.identity_radius());
    let bound = s * untouched;
    let inside = |rho: f64| (0..256).all(|k| f.eval(Complex64::from_polar(rho, TAU * k as f64 / 256.0)).norm() <= bound);
    let (mut lo, mut hi) = (0.0, s);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ConformalInterpolation {
        f,
        outer,
        radial,
        round_inner,
        round_outer,
        correction,
        untouched,
        inner_radius: 0.99 * lo,
    })
}
