//! The stretch ray `(x, y) ↦ (e^{2t}x, y)` on flat surfaces, and moduli of flat tori.

mod flow;
pub mod torus;

pub use flow::{flow, flow_exact, scale_factor, FlowError, RayParameter};
pub use torus::{lattice_basis, torus_teich_distance, ExactLattice, FlatTorus, TorusError, TorusPoint};
