use crate::extension::{IdentityInterpolant, Quadrature};
use crate::grid::{chart, dilatation, unchart, DilatationReport, Domain, GridMap, PlaneMap};
use crate::{CircleMap, QcError};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Angular lift of `f` on the circle `|z| = radius`, sampled at `n` points, with the
/// value at angle 0 in `(-1/2, 1/2]`.
pub fn angular_trace(f: &(impl PlaneMap + ?Sized), radius: f64, n: usize) -> Result<CircleMap, QcError> {
    let mut lift = Vec::with_capacity(n);
    let mut prev = f.eval(Complex64::new(radius, 0.0)).arg() / TAU;
    lift.push(prev);
    for k in 1..n {
        let a = f.eval(Complex64::from_polar(radius, TAU * k as f64 / n as f64)).arg() / TAU;
        let next = a + (prev - a).round();
        lift.push(next);
        prev = next;
    }
    CircleMap::new(lift)
}

/// Circle map induced on the outer boundary row of a map sampled on an annulus with
/// outer radius 1.
pub fn boundary_trace(m: &GridMap) -> Result<CircleMap, QcError> {
    match *m.domain() {
        Domain::Annulus { outer: 1.0, .. } => {}
        _ => return Err(QcError::InvalidGrid("boundary trace needs an annulus with outer radius 1".into())),
    }
    let n = m.n();
    for i in 0..n {
        let r = m.value(i, 0).norm();
        if (r - 1.0).abs() > 1e-6 {
            return Err(QcError::BoundaryNotPreserved { index: i, modulus: r, expected: 1.0 });
        }
    }
    let mut lift = Vec::with_capacity(n);
    let mut prev = m.value(0, 0).arg() / TAU;
    lift.push(prev);
    for i in 1..n {
        let a = m.value(i, 0).arg() / TAU;
        prev = a + (prev - a).round();
        lift.push(prev);
    }
    CircleMap::new(lift)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundAnnulus {
    pub inner: f64,
    pub outer: f64,
}

impl RoundAnnulus {
    pub fn modulus(&self) -> f64 {
        (self.outer / self.inner).ln() / TAU
    }
}

/// Map between round annuli in the plane, carrying inner circle to inner circle and
/// outer to outer.
pub struct AnnulusPiece<'a> {
    pub domain: RoundAnnulus,
    pub target: RoundAnnulus,
    pub map: &'a dyn PlaneMap,
}

/// Map of `e^{-2πM} ≤ |z| ≤ 1` with prescribed circle maps on both boundaries:
/// the identity interpolation of the outer map near `|z| = 1`, and the same
/// construction reflected across the middle of the annulus for the inner map.
pub struct AnnulusExtension {
    outer: IdentityInterpolant,
    inner: IdentityInterpolant,
    modulus: f64,
}

impl AnnulusExtension {
    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn eval_strip(&self, w: Complex64) -> Complex64 {
        let d = self.outer.depth();
        if w.im < d {
            return self.outer.eval_strip(w);
        }
        let reflected = Complex64::new(w.re, self.modulus - w.im);
        if reflected.im < d {
            let v = self.inner.eval_strip(Complex64::new(reflected.re, reflected.im.max(0.0)));
            return Complex64::new(v.re, self.modulus - v.im);
        }
        w
    }
}

impl PlaneMap for AnnulusExtension {
    fn eval(&self, z: Complex64) -> Complex64 {
        let w = unchart(z);
        chart(self.eval_strip(Complex64::new(w.re, w.im.max(0.0))))
    }
}

/// Needs `modulus ≥ 2D` so that the two interpolations do not overlap.
pub fn extend_annulus_boundary(
    outer: &CircleMap,
    inner: &CircleMap,
    modulus: f64,
    d: f64,
    q: &Quadrature,
) -> Result<AnnulusExtension, QcError> {
    let outer = IdentityInterpolant::new(outer.clone(), d, *q)?;
    let inner = IdentityInterpolant::new(inner.clone(), d, *q)?;
    if modulus < 2.0 * d {
        return Err(QcError::ModulusTooSmall { found: modulus, needed: 2.0 * d });
    }
    Ok(AnnulusExtension { outer, inner, modulus })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SewConfig {
    pub epsilon: f64,
    pub grid: (usize, usize),
    pub trace_samples: usize,
    pub quadrature: Quadrature,
}

impl Default for SewConfig {
    fn default() -> Self {
        SewConfig { epsilon: 0.01, grid: (256, 256), trace_samples: 4096, quadrature: Quadrature::default() }
    }
}

/// Result of sewing: the outer half maps into the outer target annulus, the inner
/// half into the inner target annulus, and the two agree along the core circle
/// through the gluing map up to `seam_defect` (in turns).
#[derive(Clone, Debug)]
pub struct SewnAnnuli {
    pub outer: GridMap,
    pub inner: GridMap,
    pub outer_report: DilatationReport,
    pub inner_report: DilatationReport,
    pub seam_defect: f64,
    /// Offset `c₀` of the boundary correction.
    pub correction_offset: f64,
}

impl SewnAnnuli {
    pub fn sup_k(&self) -> f64 {
        self.outer_report.sup_k.max(self.inner_report.sup_k)
    }
}

fn check_circle(piece: &AnnulusPiece, from: f64, to: f64, n: usize) -> Result<(), QcError> {
    for k in 0..n {
        let r = piece.map.eval(Complex64::from_polar(from, TAU * k as f64 / n as f64)).norm();
        if (r - to).abs() > 1e-6 * to {
            return Err(QcError::BoundaryNotPreserved { index: k, modulus: r, expected: to });
        }
    }
    Ok(())
}

/// Sews `outer: A₁ → B₁` and `inner: A₂ → B₂`, where `A₁` and `A₂` share the core
/// circle and `gluing` carries the inner circle of `B₁` to the outer circle of `B₂`
/// (angles in turns). The outer map is kept; the inner map is post-composed with a
/// self-map of `B₂` that is the identity on its inner circle and corrects the outer
/// circle so the halves match across the seam.
pub fn sew_annuli(
    outer: &AnnulusPiece,
    inner: &AnnulusPiece,
    gluing: &CircleMap,
    cfg: &SewConfig,
) -> Result<SewnAnnuli, QcError> {
    if (outer.domain.inner - inner.domain.outer).abs() > 1e-12 * outer.domain.inner {
        return Err(QcError::InvalidGrid("the two halves do not share a core circle".into()));
    }
    let needed = (1.0 / cfg.epsilon).ln() / TAU;
    for a in [outer.domain, outer.target, inner.domain, inner.target] {
        if !(a.modulus() > needed) {
            return Err(QcError::ModulusTooSmall { found: a.modulus(), needed });
        }
    }
    let depth = inner.target.modulus();
    if !(depth > 1.0) {
        return Err(QcError::ModulusTooSmall { found: depth, needed: 1.0 });
    }
    let n = cfg.trace_samples;
    let core = outer.domain.inner;
    check_circle(outer, outer.domain.outer, outer.target.outer, n)?;
    check_circle(outer, core, outer.target.inner, n)?;
    check_circle(inner, core, inner.target.outer, n)?;
    check_circle(inner, inner.domain.inner, inner.target.inner, n)?;

    let t1 = angular_trace(outer.map, core, n)?;
    let t2 = angular_trace(inner.map, core, n)?;
    let kappa = gluing.compose(&t1)?.compose(&t2.inverse())?;
    let fix = IdentityInterpolant::new(kappa, depth, cfg.quadrature)?;
    let c2 = inner.target.outer;
    let corrected = |z: Complex64| fix.eval(inner.map.eval(z) / c2) * c2;

    let (gn, gm) = cfg.grid;
    let d1 = Domain::Annulus { inner: core, outer: outer.domain.outer };
    let d2 = Domain::Annulus { inner: inner.domain.inner, outer: core };
    let m1 = GridMap::sample(d1, gn, gm, outer.map)?.with_description("sewn annulus, outer half");
    let m2 = GridMap::sample(d2, gn, gm, &corrected)?.with_description("sewn annulus, inner half");
    let seam_defect = (0..n)
        .map(|k| {
            let z = Complex64::from_polar(core, TAU * k as f64 / n as f64);
            let a = gluing.eval(outer.map.eval(z).arg() / TAU);
            let b = corrected(z).arg() / TAU;
            let d = a - b;
            (d - d.round()).abs()
        })
        .fold(0.0, f64::max);
    Ok(SewnAnnuli {
        outer_report: dilatation(&m1)?,
        inner_report: dilatation(&m2)?,
        outer: m1,
        inner: m2,
        seam_defect,
        correction_offset: fix.c0(),
    })
}

