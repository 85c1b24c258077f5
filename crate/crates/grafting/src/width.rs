use std::f64::consts::PI;

/// Euclidean width of a branch of transverse measure `mu` after grafting for time `t`.
pub fn branch_width(mu: f64, t: f64) -> f64 {
    t * mu
}

/// Total width of a branch on the surface grafted along `2πt` times the lamination:
/// the inserted part plus the width `hyperbolic` it had before grafting.
pub fn model_total_width(mu: f64, hyperbolic: f64, t: f64) -> f64 {
    branch_width(mu, 2.0 * PI * t) + hyperbolic
}
