use flat_kernel::rational::{from_f64, one, zero};
use flat_kernel::{FlatSurface, SurfaceError, Q};
use num_traits::{One, Signed};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("scale factor must be positive, got {0}")]
    InvalidScale(String),
    #[error("ray time {0} has no finite scale factor")]
    NonFiniteTime(f64),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A time along the ray. The horizontal direction is stretched by `e^{2t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayParameter {
    pub t: f64,
}

impl RayParameter {
    pub fn new(t: f64) -> Result<Self, FlowError> {
        if !(2.0 * t).exp().is_finite() || !t.is_finite() {
            return Err(FlowError::NonFiniteTime(t));
        }
        Ok(RayParameter { t })
    }

    /// The time reached after log-time `s`, i.e. `t = e^s`.
    pub fn from_log_time(s: f64) -> Result<Self, FlowError> {
        Self::new(s.exp())
    }

    /// Time whose horizontal scale factor is `k`.
    pub fn from_scale(k: f64) -> Result<Self, FlowError> {
        if !(k > 0.0) {
            return Err(FlowError::InvalidScale(k.to_string()));
        }
        Self::new(0.5 * k.ln())
    }

    pub fn scale(&self) -> f64 {
        (2.0 * self.t).exp()
    }
}

/// The exact binary rational used as `e^{2t}`. Negative times use the reciprocal of
/// the factor for `−t`, so flowing by `t` then `−t` returns the input exactly.
pub fn scale_factor(t: f64) -> Result<Q, FlowError> {
    if t == 0.0 {
        return Ok(one());
    }
    let k = (2.0 * t.abs()).exp();
    let kq = from_f64(k).filter(|k| k.is_positive()).ok_or(FlowError::NonFiniteTime(t))?;
    Ok(if t < 0.0 { kq.recip() } else { kq })
}

/// Stretches every polygon horizontally by the exact factor `k`.
pub fn flow_exact(s: &FlatSurface, k: &Q) -> Result<FlatSurface, FlowError> {
    if !k.is_positive() {
        return Err(FlowError::InvalidScale(flat_kernel::format_q(k)));
    }
    if k.is_one() {
        return Ok(s.clone());
    }
    Ok(s.map_linear(k, &zero(), &zero(), &one())?)
}

/// Ray flow by time `t`, with `e^{2t}` taken as the nearest double.
pub fn flow(s: &FlatSurface, t: f64) -> Result<FlatSurface, FlowError> {
    flow_exact(s, &scale_factor(t)?)
}
