//! Ends of half-plane surfaces: metric residues of planar and crown ends, normalized
//! truncations, generalized half-plane surfaces over a ribbon spine and the limit
//! surface attached to a vertical graph.

mod end;
mod local;
mod surface;

pub use end::{crown_residue, metric_residue, normalize_truncation, truncation_leaf_shifts, CrownEnd, PlanarEnd};
pub use local::{pullback_leading_term, truncation_height_schedule};
pub use surface::{
    boundary_exchange, build_hps, end_local_data, limit_residue_from_graph, truncate, y_infinity, Attachment,
    BoundaryPiece, EndData, GeneralizedHalfPlaneSurface, ModelChart, Residue, SurfaceEnd, Truncation,
    TruncationBoundary,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HalfPlaneError {
    #[error("truncation height {height} is below the admissible bound for this end")]
    HTooSmall { height: String },
    #[error("side {0} cannot carry a half-plane or a half-cylinder")]
    UnattachableSide(usize),
    #[error("end {end} would have order {order}")]
    LowOrderEnd { end: usize, order: u32 },
    #[error("no end with index {0}")]
    NoSuchEnd(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Graph(#[from] vertical_graph::GraphError),
}
