//! Planar Dirichlet problem, discrete harmonic conjugate and holomorphic
//! polynomial approximation of boundary data.
//!
//! The Laplacian is discretized by the 5-point stencil, switched to the
//! Shortley–Weller form on nodes whose stencil arms cross the boundary.

mod approx;
mod conjugate;
mod dirichlet;
mod domain;

pub use approx::{holo_poly_approx, PolyApprox};
pub use conjugate::{cauchy_riemann_residual, harmonic_conjugate};
pub use dirichlet::{dirichlet_residual, solve_dirichlet};
pub use domain::{is_jordan, Arm, Attachment, Domain2D, GridField, Lattice, DIRS};
