//! Vertical saddle connections of flat surfaces, the appended vertical graph with
//! its ribbon sides, and the horizontal collar decomposition.

mod collar;
mod graph;
pub mod ribbon;
pub mod trace;

pub use collar::{decomposition_of, polygonal_decomposition, COLLAR_TRACE_LIMIT, CollarError, CollarRect, PolygonalPiece};
pub use graph::{
    appended_graph, appended_graph_with, graph_vertices, vertical_saddle_connections, Feeler, GraphError,
    GraphVertex, Prong, SaddleConnection, VerticalGraph,
};
pub use ribbon::{alternating_residue, End, HalfEdge, RibbonGraph, Side};
pub use trace::PathSegment;
