use crate::HalfPlaneError;
use num_complex::Complex64;

/// Leading coefficient of `f*q` at a pole of order `n` when `q` has leading
/// coefficient `a_n` and `f(0) = 0`: `|f′(0)|^{2−n}·a_n`.
pub fn pullback_leading_term(a_n: Complex64, n: u32, fprime0: f64) -> Result<Complex64, HalfPlaneError> {
    if n < 2 {
        return Err(HalfPlaneError::InvalidInput(format!("pole order {n} is below 2")));
    }
    if !(fprime0 > 0.0 && fprime0.is_finite()) {
        return Err(HalfPlaneError::InvalidInput(format!("|f'(0)| = {fprime0} must be positive")));
    }
    Ok(a_n * fprime0.powi(2 - n as i32))
}

/// Height at which the `i`-th planar end is glued in: `(H₀·2^i)^{n/2}`.
pub fn truncation_height_schedule(h0: f64, n: u32, i: u32) -> Result<f64, HalfPlaneError> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(HalfPlaneError::InvalidInput(format!("H0 = {h0} must be positive")));
    }
    Ok((h0 * 2f64.powi(i as i32)).powf(n as f64 / 2.0))
}
