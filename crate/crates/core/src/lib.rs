//! Palindromic discontinuous Galerkin solver for lattice-kinetic relaxation
//! systems.
//!
//! A 1D system of `m` conservation laws is represented by `2m` transport
//! equations with velocities `±λ`, coupled through a BGK relaxation toward an
//! equilibrium whose moments are `(w, q(w))`. Each time step splits transport
//! and relaxation:
//!
//! * transport uses an implicit upwind nodal DG method on Gauss-Lobatto
//!   nodes; the implicit system is block triangular and is solved by sweeping
//!   the mesh in the flow direction, so large CFL numbers cost nothing extra;
//! * the relaxation is a pointwise Crank-Nicolson update, exact in `w`;
//! * the symmetric brick `T(dt/4) C(dt/2) T(dt/2) C(dt/2) T(dt/4)` stays second
//!   order as `τ -> 0`, and palindromic compositions of it (triple jump with
//!   real or complex fractions, Suzuki, Kahan-Li) reach orders 4 and 6.
//!
//! Complex composition fractions run the whole state in complex arithmetic;
//! see [`scalar::Scalar`].
//!
//! The [`harness`] module drives complete experiments from a configuration
//! file; the `palindg` binary exposes it on the command line.

pub mod dg;
pub mod error;
pub mod flux;
pub mod harness;
pub mod lattice;
pub mod palindrome;
pub mod reference;
pub mod relaxation;
pub mod scalar;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/kinetic.md")]
    mod kinetic {}
    #[doc = include_str!("../../../book/src/transport.md")]
    mod transport {}
    #[doc = include_str!("../../../book/src/relaxation.md")]
    mod relaxation {}
    #[doc = include_str!("../../../book/src/compositions.md")]
    mod compositions {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
