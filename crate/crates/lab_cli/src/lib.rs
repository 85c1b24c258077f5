//! File formats, renderings and scripted experiments on top of the flat-surface,
//! ray, limit, grafting and quasiconformal crates, plus the `lab` command line.

pub mod cli;
pub mod experiments;
pub mod qc_suite;
pub mod report;
pub mod surface_file;
pub mod svg;

pub use experiments::{run_experiment, ExperimentConfig, EXPERIMENTS};
pub use report::{Artifact, Assertion, ExperimentReport};
pub use surface_file::{load_surface, parse_surface_file, write_surface, FileError, ParsedFile, SurfaceFile};
pub use svg::{render_graph, render_surface, render_truncation, RenderError};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Surface(#[from] flat_kernel::SurfaceError),
    #[error(transparent)]
    Isometry(#[from] flat_kernel::IsometryError),
    #[error(transparent)]
    Flow(#[from] teich_flow::FlowError),
    #[error(transparent)]
    Torus(#[from] teich_flow::TorusError),
    #[error(transparent)]
    Graph(#[from] vertical_graph::GraphError),
    #[error(transparent)]
    HalfPlane(#[from] half_plane::HalfPlaneError),
    #[error(transparent)]
    Graft(#[from] grafting::GraftError),
    #[error(transparent)]
    Qc(#[from] qc_toolkit::QcError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}
