//! Computation with α-analytic (polyanalytic) functions.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`polycore`]: exact representation `f = Σ a_β(z) z̄^β` with rational
//!   holomorphic coefficients, Wirtinger derivatives and exact order.
//! * [`modulus`]: constant-modulus detection and recovery of the form
//!   `λ·conj(Q)/Q`.
//! * [`sampling`]: limiting directions / condensation order of point sets,
//!   polyanalytic least-squares fitting and the uniqueness test.
//! * [`harmonic`]: planar Dirichlet solver, discrete harmonic conjugate and
//!   holomorphic polynomial boundary approximation.
//! * [`rado`]: numerical verification of extension across zero sets and
//!   Hartogs-type assembly of separate polyanalyticity.
//! * [`levi`]: Levi form of graph hypersurfaces, attached disc families and
//!   boundary maximum modulus checks.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod harmonic;
pub mod levi;
pub mod linalg;
pub mod modulus;
pub mod polycore;
pub mod rado;
pub mod sampling;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;
