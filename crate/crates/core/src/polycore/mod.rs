//! Exact representation of α-analytic functions
//! `f(z) = Σ_β a_β(z)·z̄^β` with rational holomorphic coefficients, and the
//! Wirtinger calculus on them.

mod cpoly;
mod multiindex;
mod polyanalytic;
mod rational;
mod witness;

pub use cpoly::CPoly;
pub use multiindex::MultiIndex;
pub use polyanalytic::PolyAnalytic;
pub use rational::RationalHolo;
pub use witness::{HoloFn, MWitness};
