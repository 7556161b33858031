//! Default tolerances, in one place.
//!
//! | constant | used by |
//! |---|---|
//! | [`SYMBOLIC_ZERO`] | pruning of polynomial coefficients after arithmetic |
//! | [`EVAL_SINGULAR`] | `|den(z)| < EVAL_SINGULAR·(1+|num(z)|)` is a pole |
//! | [`CONSTANT_MODULUS`] | relative vanishing of `N·N̄ − C²·D·D̄` |
//! | [`RANK`] | relative singular value cutoff for numerical rank |
//! | [`SHELLS`], [`ANGULAR_RESOLUTION`] | condensation-order defaults |
//! | [`AGREEMENT`] | pointwise agreement in the uniqueness test |
//! | [`DIRICHLET_RESIDUAL`] | solver residual relative to `max|g|` |
//! | [`HARMONIC_RESIDUAL`] | conjugate precondition |
//! | [`PERIOD`] | nonzero period of the conjugate differential |
//! | [`ZERO_SET`] | `|f| < ZERO_SET·max|f|` marks the zero set |
//! | [`INTERFACE_FACTOR`] | residual factor flagging a defect on the zero-set band |
//! | [`HERMITIAN_DEFECT`] | Levi matrix symmetry |
//! | [`TRACE_CONSTANT`] | relative spread of `|f|` on the manifold patch |

pub const SYMBOLIC_ZERO: f64 = 1e-12;
pub const EVAL_SINGULAR: f64 = 1e-10;
pub const CONSTANT_MODULUS: f64 = 1e-10;
pub const RANK: f64 = 1e-10;
pub const SHELLS: usize = 4;
pub const ANGULAR_RESOLUTION: f64 = 0.1;
pub const AGREEMENT: f64 = 1e-9;
pub const DIRICHLET_RESIDUAL: f64 = 1e-10;
pub const HARMONIC_RESIDUAL: f64 = 1e-8;
pub const PERIOD: f64 = 1e-6;
pub const ZERO_SET: f64 = 1e-8;
pub const INTERFACE_FACTOR: f64 = 100.0;
pub const SMOOTHNESS_FACTOR: f64 = 10.0;
pub const HERMITIAN_DEFECT: f64 = 1e-8;
pub const TRACE_CONSTANT: f64 = 1e-9;
/// Balk-form match on the extension side.
pub const BALK_MATCH: f64 = 1e-8;
