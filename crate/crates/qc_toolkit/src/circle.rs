use crate::QcError;
use rayon::prelude::*;

/// Degree-one orientation-preserving circle homeomorphism, stored as samples of a
/// lift `h̃` at `k/n` for `k = 0..n` and extended by `h̃(x + 1) = h̃(x) + 1` with
/// linear interpolation in between. The circle is `ℝ/ℤ`, i.e. angle over `2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleMap {
    lift: Vec<f64>,
    /// `lift` followed by `lift[0] + 1`.
    ext: Vec<f64>,
}

fn extend(lift: &[f64]) -> Vec<f64> {
    let mut ext = lift.to_vec();
    ext.push(lift[0] + 1.0);
    ext
}

impl CircleMap {
    pub fn new(lift: Vec<f64>) -> Result<Self, QcError> {
        let bad = |s: String| Err(QcError::InvalidCircleMap(s));
        if lift.len() < 2 {
            return bad("need at least two samples".into());
        }
        if let Some(k) = lift.iter().position(|v| !v.is_finite()) {
            return bad(format!("sample {k} is not finite"));
        }
        if let Some(k) = lift.windows(2).position(|w| w[1] <= w[0]) {
            return bad(format!("lift is not increasing at sample {}", k + 1));
        }
        if lift[lift.len() - 1] >= lift[0] + 1.0 {
            return bad("lift gains more than one turn".into());
        }
        Ok(CircleMap { ext: extend(&lift), lift })
    }

    pub fn from_lift(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, QcError> {
        Self::new((0..n).map(|k| f(k as f64 / n as f64)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::rotation(n, 0.0)
    }

    /// Rotation by `c` turns.
    pub fn rotation(n: usize, c: f64) -> Self {
        let lift: Vec<f64> = (0..n).map(|k| k as f64 / n as f64 + c).collect();
        CircleMap { ext: extend(&lift), lift }
    }

    pub fn len(&self) -> usize {
        self.lift.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &[f64] {
        &self.lift
    }

    /// Lift value at grid index `k`, any integer.
    pub fn at_index(&self, k: i64) -> f64 {
        let n = self.lift.len() as i64;
        self.lift[k.rem_euclid(n) as usize] + k.div_euclid(n) as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.lift.len();
        let turns = x.floor();
        let t = (x - turns) * n as f64;
        let k = (t as usize).min(n - 1);
        let frac = t - k as f64;
        let a = self.ext[k];
        if frac == 0.0 {
            return a + turns;
        }
        a + frac * (self.ext[k + 1] - a) + turns
    }

    /// Inverse lift, resampled on a grid of the same size.
    pub fn inverse(&self) -> CircleMap {
        let n = self.lift.len();
        let ext = &self.ext;
        let lift: Vec<f64> = (0..n)
            .map(|k| {
                let y = k as f64 / n as f64;
                let turns = (y - self.lift[0]).floor();
                let yr = y - turns;
                let j = ext.partition_point(|&v| v <= yr).clamp(1, n) - 1;
                let x = (j as f64 + (yr - ext[j]) / (ext[j + 1] - ext[j])) / n as f64;
                x + turns
            })
            .collect();
        CircleMap { ext: extend(&lift), lift }
    }

    /// `self ∘ inner`, sampled on the grid of `inner`.
    pub fn compose(&self, inner: &CircleMap) -> Result<CircleMap, QcError> {
        CircleMap::new(inner.lift.iter().map(|&x| self.eval(x)).collect())
    }

    /// Largest deviation `|h̃(x) − x − c|` minimised over the constant `c`, at the samples.
    pub fn distance_to_rotation(&self) -> f64 {
        let n = self.lift.len() as f64;
        let d: Vec<f64> = self.lift.iter().enumerate().map(|(k, v)| v - k as f64 / n).collect();
        let hi = d.iter().cloned().fold(f64::MIN, f64::max);
        let lo = d.iter().cloned().fold(f64::MAX, f64::min);
        (hi - lo) / 2.0
    }
}

/// Supremum of `max(ρ, 1/ρ)`, `ρ = (h̃(x+t) − h̃(x)) / (h̃(x) − h̃(x−t))`, over triples
/// with `x` and `t ≤ 1/2` on the sample grid of `h`.
pub fn quasisymmetry_constant(h: &CircleMap) -> f64 {
    let n = h.len() as i64;
    (0..n)
        .into_par_iter()
        .map(|k| {
            let c = h.at_index(k);
            (1..=n / 2).fold(1.0f64, |best, j| {
                let rho = (h.at_index(k + j) - c) / (c - h.at_index(k - j));
                best.max(rho.max(1.0 / rho))
            })
        })
        .reduce(|| 1.0, f64::max)
}
