//! Upwind nodal discontinuous Galerkin discretization of the kinetic
//! transport step.

mod field;
mod mesh;
mod quadrature;
mod transport;

pub use field::KineticField;
pub use mesh::DgMesh;
pub use quadrature::{gauss_lobatto, GaussLobatto, MAX_DEGREE};
pub use transport::{BoundaryCondition, Direction, LocalLu, Transport, TransportOrder, BLOCK_CONDITION_LIMIT};
