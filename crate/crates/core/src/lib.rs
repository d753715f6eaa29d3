//! Strain transfer for fibers embedded in elastic matrices.
//!
//! The crate covers four layers:
//!
//! - [`tensor`]: symmetric rank-2 and rank-4 tensors, Voigt/Mandel converters,
//!   material constructors and frame rotations.
//! - [`stp`]: the analytical strain transfer operator of an orthotropic fiber in an
//!   orthotropic matrix, the effective stretching modulus of a fiber, and the
//!   extended recovery that replaces the fiber-direction strain with the one obtained
//!   from a solve with a superposed 1D fiber.
//! - [`mesh`] and [`fem`]: tetrahedral meshes, fiber edge chains, P1 elasticity with
//!   truss-like fiber terms, Dirichlet elimination and a Jacobi-preconditioned CG.
//! - [`pipeline`]: the three-solution case runner and CSV sensor traces.

pub mod error;
pub mod fem;
pub mod mesh;
pub mod pipeline;
pub mod stp;
pub mod tensor;

pub use error::{Error, Result};
