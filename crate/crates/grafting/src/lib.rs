//! Grafting on flat surfaces: inserting flat cylinders along closed vertical
//! geodesics, the closed form on flat tori, and surfaces assembled from weighted
//! train-track branches whose widths grow linearly with the grafting time.

mod cylinder;
mod torus;
mod track;
mod width;

pub use cylinder::{graft_cylinder, GraftLocus};
pub use torus::{graft_lattice, graft_torus, SimpleCurve};
pub use track::{
    build_yt, piece_ends, random_track, Branch, BranchKind, Face, Flank, Half, HorizontalSegment, Identification,
    Piece, PieceEnd, TrainTrackData, VerticalSegment, WidthScale,
};
pub use width::{branch_width, model_total_width};

use flat_kernel::{EdgeRef, SurfaceError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraftError {
    #[error("locus edge {0} is not vertical")]
    LocusNotVertical(EdgeRef),
    #[error("locus is not a simple closed geodesic: {0}")]
    LocusNotEmbedded(String),
    #[error("grafting width must be nonnegative, got {0}")]
    NegativeWidth(String),
    #[error("curve ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("width scale must be positive, got {0}")]
    InvalidScale(String),
    #[error("branch {branch} has height {height}, not above the truncation height {min}")]
    HTooSmall { branch: usize, height: String, min: String },
    #[error("piece {piece}: recorded end residues {recorded:?} but the branches give {computed:?}")]
    ResidueMismatch { piece: usize, recorded: Vec<String>, computed: Vec<String> },
    #[error("invalid track: {0}")]
    InvalidTrack(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
