use crate::grid::{dilatation, DilatationReport, Domain, GridMap};
use crate::QcError;
use num_complex::Complex64;

/// Maps of the bottom and top sides `[0, l₁] → [0, l₂]`, sampled at `l₁·k/(n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodBoundary {
    pub bottom: Vec<f64>,
    pub top: Vec<f64>,
}

impl GoodBoundary {
    /// Both sides stretched linearly.
    pub fn linear(n: usize, l2: f64) -> Self {
        let side: Vec<f64> = (0..n).map(|k| l2 * k as f64 / (n - 1) as f64).collect();
        GoodBoundary { bottom: side.clone(), top: side }
    }

    pub fn from_fns(n: usize, l1: f64, bottom: impl Fn(f64) -> f64, top: impl Fn(f64) -> f64) -> Self {
        let xs = (0..n).map(|k| l1 * k as f64 / (n - 1) as f64);
        GoodBoundary { bottom: xs.clone().map(&bottom).collect(), top: xs.map(&top).collect() }
    }
}

/// Allowed multiplicative error `epsilon` of the derivative and additive length error `additive`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Goodness {
    pub epsilon: f64,
    pub additive: f64,
}

#[derive(Clone, Debug)]
pub struct RectangleExtension {
    pub map: GridMap,
    pub report: DilatationReport,
    /// `(sup K − 1) / ε`.
    pub constant: f64,
}

fn interp(samples: &[f64], l1: f64, x: f64) -> f64 {
    let n = samples.len();
    let t = (x / l1 * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
    let k = (t.floor() as usize).min(n - 2);
    samples[k] + (t - k as f64) * (samples[k + 1] - samples[k])
}

fn check_side(name: &str, f: &[f64], l1: f64, l2: f64, g: &Goodness) -> Result<(), QcError> {
    let bad = |s: String| Err(QcError::NotGoodBoundary(format!("{name} side: {s}")));
    let n = f.len();
    if n < 2 {
        return bad("needs at least two samples".into());
    }
    let tol = 1e-12 * l2.max(1.0);
    if f[0].abs() > tol || (f[n - 1] - l2).abs() > tol {
        return bad("corners are not mapped to corners".into());
    }
    let dx = l1 / (n - 1) as f64;
    let slopes: Vec<f64> = f.windows(2).map(|w| (w[1] - w[0]) / dx).collect();
    if slopes.iter().any(|&s| !(s > 0.0)) {
        return bad("not increasing".into());
    }
    let d = slopes.iter().cloned().fold(f64::MIN, f64::max);
    if (d - 1.0).abs() > g.epsilon {
        return bad(format!("derivative bound {d} is not within {} of 1", g.epsilon));
    }
    let shifts = f.iter().enumerate().map(|(k, v)| v - k as f64 * dx);
    let (lo, hi) = shifts.fold((f64::MAX, f64::MIN), |(lo, hi), s| (lo.min(s), hi.max(s)));
    if hi - lo > g.additive {
        return bad(format!("length error {} exceeds {}", hi - lo, g.additive));
    }
    Ok(())
}

/// Extends boundary data between `[0, l₁] × [0, h]` and `[0, l₂] × [0, h]` by blending
/// the two horizontal maps linearly in height, `(x, y) ↦ ((1 − y/h) f_bot(x) + (y/h) f_top(x), y)`.
/// Corners are pinned, so the vertical sides are carried isometrically.
pub fn extend_good_rectangle_map(
    fb: &GoodBoundary,
    (l1, h): (f64, f64),
    (l2, h2): (f64, f64),
    g: &Goodness,
    (n, m): (usize, usize),
) -> Result<RectangleExtension, QcError> {
    let bad = |s: String| Err(QcError::NotGoodBoundary(s));
    if h != h2 || !(h > 0.0) {
        return bad(format!("heights {h} and {h2} differ"));
    }
    if !(l1 > h && l2 > h) {
        return bad("horizontal sides must be longer than the vertical ones".into());
    }
    if !((l1 - l2).abs() < g.additive) {
        return bad(format!("side lengths differ by {}, not below {}", (l1 - l2).abs(), g.additive));
    }
    if g.additive / h > g.epsilon {
        return bad(format!("A/h = {} exceeds ε = {}", g.additive / h, g.epsilon));
    }
    check_side("bottom", &fb.bottom, l1, l2, g)?;
    check_side("top", &fb.top, l1, l2, g)?;
    let domain = Domain::Rectangle { x0: 0.0, x1: l1, y0: 0.0, y1: h };
    let map = GridMap::sample(domain, n, m, &|z: Complex64| {
        let s = z.im / h;
        Complex64::new((1.0 - s) * interp(&fb.bottom, l1, z.re) + s * interp(&fb.top, l1, z.re), z.im)
    })?
    .with_description("good rectangle extension");
    let report = dilatation(&map)?;
    let constant = (report.sup_k - 1.0) / g.epsilon;
    Ok(RectangleExtension { map, report, constant })
}
