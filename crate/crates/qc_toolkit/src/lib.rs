//! Quasiconformal maps sampled on grids: dilatation measurement, circle maps and
//! their quasisymmetry constants, the Beurling–Ahlfors extension and the explicit
//! interpolation, rectangle extension and annulus sewing constructions built on it.
//!
//! Disks and annuli are handled through the cylinder chart `w ↦ e^{2πiw}`: a point
//! `x + iy` with `y ≥ 0` corresponds to radius `e^{-2πy}` and angle `2πx`.

mod annulus;
mod circle;
mod conformal;
mod extension;
mod grid;
mod rectangle;

pub use annulus::{
    angular_trace, boundary_trace, extend_annulus_boundary, sew_annuli, AnnulusExtension, AnnulusPiece, RoundAnnulus,
    SewConfig, SewnAnnuli,
};
pub use circle::{quasisymmetry_constant, CircleMap};
pub use conformal::{
    fix_near_zero, interpolate_with_conformal, ConformalInterpolation, ConformalMap, FixedNearZero, Holomorphic,
    InterpolationConfig,
};
pub use extension::{
    ahlfors_beurling_at, beurling_ahlfors, interpolate_identity, mean_offset, periodicity_defect, IdentityInterpolant,
    Quadrature,
};
pub use grid::{chart, dilatation, unchart, DilatationReport, Domain, GridMap, PlaneMap};
pub use rectangle::{extend_good_rectangle_map, Goodness, GoodBoundary, RectangleExtension};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcError {
    #[error("Jacobian is not positive at sample ({i}, {j})")]
    DegenerateJacobian { i: usize, j: usize },
    #[error("quadrature defect {defect:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { defect: f64, tolerance: f64 },
    #[error("interpolation depth must exceed 1, got {0}")]
    DTooSmall(f64),
    #[error("derivative at the origin is {0}, expected 1")]
    DerivativeNotNormalized(String),
    #[error("map does not fix the origin: image {0}")]
    NotFixingOrigin(String),
    #[error("boundary data is not good: {0}")]
    NotGoodBoundary(String),
    #[error("boundary sample {index} lands at modulus {modulus}, expected {expected}")]
    BoundaryNotPreserved { index: usize, modulus: f64, expected: f64 },
    #[error("image of the boundary circle is not star-shaped about the origin")]
    NotStarShaped,
    #[error("annulus modulus {found} is below the required {needed}")]
    ModulusTooSmall { found: f64, needed: f64 },
    #[error("invalid circle map: {0}")]
    InvalidCircleMap(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
