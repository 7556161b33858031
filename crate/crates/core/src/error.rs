use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A coefficient denominator vanishes (numerically) at the evaluation point.
    SingularPoint,
    /// Conjugation would leave the class of rational-coefficient functions.
    NotRepresentable,
    /// The function has an empty domain of definition.
    SingularEverywhere,
    /// A denominator was the zero polynomial.
    ZeroDenominator,
    /// Dimensions of operands do not agree.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Variable index out of range or repetition count zero.
    InvalidArgument(String),
    /// The constant-modulus linear system only has the trivial solution.
    NoSolution,
    /// Numerical rank below the number of unknowns.
    RankDeficient {
        rank: usize,
        unknowns: usize,
        condition: f64,
    },
    /// Not enough points to populate the requested shells.
    InsufficientSamples {
        needed: usize,
        found: usize,
    },
    DisconnectedDomain {
        components: usize,
    },
    /// Boundary polyline is not a simple closed curve.
    NotJordan,
    SolverDivergence {
        iterations: usize,
        residual: f64,
    },
    NotHarmonic {
        residual: f64,
    },
    MultiplyConnected {
        period: f64,
    },
    TargetUnreachable {
        degree: usize,
        achieved: f64,
    },
    GridTooSmall,
    /// Derivatives up to order q-1 jump across the zero set.
    NotCqSmooth {
        jump: f64,
        bound: f64,
    },
    /// A one-variable slice violates the claimed order.
    SliceViolation {
        variable: usize,
        slice: usize,
        residual: f64,
    },
    NotHermitian {
        defect: f64,
    },
    NoPositiveEigenvalue,
    AttachmentFailure {
        disc: usize,
        defect: f64,
    },
    CoverageFailure {
        uncovered: usize,
        tested: usize,
    },
    SingularOnClosure {
        min_denominator: f64,
    },
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularPoint => write!(f, "evaluation point lies on the singular set"),
            Error::NotRepresentable => {
                write!(f, "conjugate of a non-polynomial coefficient is not representable")
            }
            Error::SingularEverywhere => write!(f, "function has an empty domain"),
            Error::ZeroDenominator => write!(f, "denominator is the zero polynomial"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NoSolution => write!(f, "linear system has only the trivial solution"),
            Error::RankDeficient { rank, unknowns, condition } => {
                write!(f, "rank deficient: rank {rank} < {unknowns} unknowns (condition {condition:e})")
            }
            Error::InsufficientSamples { needed, found } => {
                write!(f, "insufficient samples: need {needed}, found {found}")
            }
            Error::DisconnectedDomain { components } => {
                write!(f, "domain interior has {components} components")
            }
            Error::NotJordan => write!(f, "boundary polyline is not a Jordan curve"),
            Error::SolverDivergence { iterations, residual } => {
                write!(f, "solver did not converge after {iterations} iterations (residual {residual:e})")
            }
            Error::NotHarmonic { residual } => {
                write!(f, "field is not discrete-harmonic (residual {residual:e})")
            }
            Error::MultiplyConnected { period } => {
                write!(f, "domain is multiply connected (period {period:e})")
            }
            Error::TargetUnreachable { degree, achieved } => {
                write!(f, "approximation target unreachable at degree {degree} (achieved {achieved:e})")
            }
            Error::GridTooSmall => write!(f, "grid too small for the requested stencil"),
            Error::NotCqSmooth { jump, bound } => {
                write!(f, "derivatives jump across the zero set ({jump:e} > {bound:e})")
            }
            Error::SliceViolation { variable, slice, residual } => {
                write!(f, "slice {slice} in variable {} violates the order (residual {residual:e})", variable + 1)
            }
            Error::NotHermitian { defect } => {
                write!(f, "Levi matrix not Hermitian within tolerance ({defect:e})")
            }
            Error::NoPositiveEigenvalue => write!(f, "Levi form has no positive eigenvalue"),
            Error::AttachmentFailure { disc, defect } => {
                write!(f, "disc {disc} not attached (defect {defect:e})")
            }
            Error::CoverageFailure { uncovered, tested } => {
                write!(f, "{uncovered} of {tested} test points not covered by discs")
            }
            Error::SingularOnClosure { min_denominator } => {
                write!(f, "witness is singular on the covered region (min denominator {min_denominator:e})")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
