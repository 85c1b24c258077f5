//! Exact rational flat surfaces: polygons glued by half-translations.

pub mod catalog;
pub mod geom;
mod cells;
mod isometry;
pub mod rational;
mod surface;

pub use geom::{VerticalDir, Vec2};
pub use cells::{isometric_rectilinear, CellError, CELL_LIMIT};
pub use isometry::{isometric, isometric_with_limit, IsometryError, ISOMETRY_POLYGON_LIMIT};
pub use rational::{format_q, parse_q, q, qi, Q};
pub use surface::{
    build_surface, class_angle_histogram, ConePoint, Corner, EdgeRef, FlatSurface, Gluing, HalfTranslation, Link,
    Marking, Polygon, Relabeling, Sign, SurfaceError, VertexClass,
};
