use crate::QcError;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt::Write;

/// A map of the plane that can be evaluated pointwise.
pub trait PlaneMap: Sync {
    fn eval(&self, z: Complex64) -> Complex64;
}

impl<F: Fn(Complex64) -> Complex64 + Sync> PlaneMap for F {
    fn eval(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}

/// `x + iy ↦ e^{2πi(x+iy)}`.
pub fn chart(w: Complex64) -> Complex64 {
    Complex64::from_polar((-TAU * w.im).exp(), TAU * w.re)
}

/// Inverse of [`chart`] with the angle in `(-1/2, 1/2]`.
pub fn unchart(z: Complex64) -> Complex64 {
    Complex64::new(z.arg() / TAU, -z.norm().ln() / TAU)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Domain {
    /// `[x0, x1] × [y0, y1]`, both ends included.
    Rectangle { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// `inner ≤ |z| ≤ outer`, sampled periodically in angle and uniformly in log-radius,
    /// row 0 on the outer circle.
    Annulus { inner: f64, outer: f64 },
}

impl Domain {
    fn validate(&self, n: usize, m: usize) -> Result<(), QcError> {
        let bad = |s: &str| Err(QcError::InvalidGrid(s.to_string()));
        if m < 3 || n < 3 {
            return bad("need at least 3 samples per direction");
        }
        match *self {
            Domain::Rectangle { x0, x1, y0, y1 } => {
                if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
                    return bad("rectangle has no interior");
                }
            }
            Domain::Annulus { inner, outer } => {
                if !(inner > 0.0 && outer > inner && outer.is_finite()) {
                    return bad("annulus radii must satisfy 0 < inner < outer");
                }
            }
        }
        Ok(())
    }

    pub fn periodic(&self) -> bool {
        matches!(self, Domain::Annulus { .. })
    }

    /// Chart coordinates of sample `(i, j)`.
    pub fn chart_point(&self, n: usize, m: usize, i: usize, j: usize) -> Complex64 {
        match *self {
            Domain::Rectangle { x0, x1, y0, y1 } => Complex64::new(
                x0 + (x1 - x0) * i as f64 / (n - 1) as f64,
                y0 + (y1 - y0) * j as f64 / (m - 1) as f64,
            ),
            Domain::Annulus { inner, outer } => {
                let (a, b) = (-outer.ln() / TAU, -inner.ln() / TAU);
                Complex64::new(i as f64 / n as f64, a + (b - a) * j as f64 / (m - 1) as f64)
            }
        }
    }

    pub fn point(&self, n: usize, m: usize, i: usize, j: usize) -> Complex64 {
        let w = self.chart_point(n, m, i, j);
        match self {
            Domain::Rectangle { .. } => w,
            Domain::Annulus { .. } => chart(w),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Rectangle { x0, x1, y0, y1 } => format!("rectangle [{x0}, {x1}] x [{y0}, {y1}]"),
            Domain::Annulus { inner, outer } => format!("annulus {inner} <= |z| <= {outer}"),
        }
    }
}

/// Samples of a map on an `n × m` grid, stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMap {
    domain: Domain,
    n: usize,
    m: usize,
    values: Vec<Complex64>,
    description: String,
}

impl GridMap {
    pub fn sample(domain: Domain, n: usize, m: usize, f: &(impl PlaneMap + ?Sized)) -> Result<Self, QcError> {
        domain.validate(n, m)?;
        let values = (0..n * m).into_par_iter().map(|k| f.eval(domain.point(n, m, k % n, k / n))).collect();
        Self::from_values(domain, n, m, values)
    }

    pub fn from_values(domain: Domain, n: usize, m: usize, values: Vec<Complex64>) -> Result<Self, QcError> {
        domain.validate(n, m)?;
        if values.len() != n * m {
            return Err(QcError::InvalidGrid(format!("expected {} values, got {}", n * m, values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(QcError::InvalidGrid(format!("value at ({}, {}) is not finite", k % n, k / n)));
        }
        let description = domain.describe();
        Ok(GridMap { domain, n, m, values, description })
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        self.domain.point(self.n, self.m, i, j)
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.n + i]
    }

    /// Differences of `g` along the two grid directions at `(i, j)`: central in the
    /// interior and across the periodic seam, second-order one-sided at the boundary.
    fn differences(&self, i: usize, j: usize, g: impl Fn(usize, usize) -> Complex64) -> (Complex64, Complex64) {
        let along = |k: usize, len: usize, periodic: bool, at: &dyn Fn(usize) -> Complex64| -> Complex64 {
            if periodic {
                (at((k + 1) % len) - at((k + len - 1) % len)) * 0.5
            } else if k == 0 {
                (at(0) * -3.0 + at(1) * 4.0 - at(2)) * 0.5
            } else if k == len - 1 {
                (at(k) * 3.0 - at(k - 1) * 4.0 + at(k - 2)) * 0.5
            } else {
                (at(k + 1) - at(k - 1)) * 0.5
            }
        };
        let du = along(i, self.n, self.domain.periodic(), &|k| g(k, j));
        let dv = along(j, self.m, false, &|k| g(i, k));
        (du, dv)
    }

    /// `(f_z, f_z̄)` at a sample, by the chain rule through the sampling chart.
    pub fn wirtinger(&self, i: usize, j: usize) -> (Complex64, Complex64) {
        let (fu, fv) = self.differences(i, j, |a, b| self.value(a, b));
        let (pu, pv) = self.differences(i, j, |a, b| self.point(a, b));
        // Df · [pu pv] = [fu fv] as real 2×2 matrices.
        let det = pu.re * pv.im - pv.re * pu.im;
        let inv = [[pv.im / det, -pv.re / det], [-pu.im / det, pu.re / det]];
        let d = [
            [fu.re * inv[0][0] + fv.re * inv[1][0], fu.re * inv[0][1] + fv.re * inv[1][1]],
            [fu.im * inv[0][0] + fv.im * inv[1][0], fu.im * inv[0][1] + fv.im * inv[1][1]],
        ];
        let fz = Complex64::new(d[0][0] + d[1][1], d[1][0] - d[0][1]) * 0.5;
        let fzb = Complex64::new(d[0][0] - d[1][1], d[1][0] + d[0][1]) * 0.5;
        (fz, fzb)
    }

    fn interior(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        let cols = if self.domain.periodic() { 0..self.n } else { 1..self.n - 1 };
        (cols, 1..self.m - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilatationReport {
    pub sup_k: f64,
    /// K at interior samples, row by row, `cols` per row.
    pub field: Vec<f64>,
    pub cols: usize,
    pub rows: usize,
    /// `(level, value)` pairs.
    pub quantiles: Vec<(f64, f64)>,
}

impl DilatationReport {
    pub fn field_csv(&self) -> String {
        let mut s = String::from("col,row,k\n");
        for (k, v) in self.field.iter().enumerate() {
            let _ = writeln!(s, "{},{},{v:.12}", k % self.cols, k / self.cols);
        }
        s
    }

    pub fn quantiles_csv(&self) -> String {
        let mut s = String::from("level,k\n");
        for (q, v) in &self.quantiles {
            let _ = writeln!(s, "{q},{v:.12}");
        }
        s
    }
}

const LEVELS: [f64; 5] = [0.5, 0.9, 0.99, 0.999, 1.0];

/// Pointwise dilatation `(|f_z| + |f_z̄|) / (|f_z| − |f_z̄|)` over the interior samples.
pub fn dilatation(map: &GridMap) -> Result<DilatationReport, QcError> {
    let (cols, rows) = map.interior();
    let (nc, nr) = (cols.len(), rows.len());
    let field: Vec<Result<f64, QcError>> = (0..nc * nr)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (cols.start + k % nc, rows.start + k / nc);
            let (fz, fzb) = map.wirtinger(i, j);
            let (a, b) = (fz.norm(), fzb.norm());
            let k = (a + b) / (a - b);
            if a > b && k.is_finite() {
                Ok(k)
            } else {
                Err(QcError::DegenerateJacobian { i, j })
            }
        })
        .collect();
    let field = field.into_iter().collect::<Result<Vec<f64>, _>>()?;
    let mut sorted = field.clone();
    sorted.sort_by(f64::total_cmp);
    let quantiles = LEVELS
        .iter()
        .map(|&q| (q, sorted[((sorted.len() - 1) as f64 * q).round() as usize]))
        .collect();
    Ok(DilatationReport { sup_k: *sorted.last().expect("grid has interior"), field, cols: nc, rows: nr, quantiles })
}
