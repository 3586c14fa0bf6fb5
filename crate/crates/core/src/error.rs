use num_complex::Complex64;
use thiserror::Error;

use crate::gains::InfiniteReason;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no roots of a constant")]
    ConstantPolynomial,

    #[error("unpaired complex root {0}")]
    UnpairedComplexRoot(Complex64),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by an identically zero transfer function")]
    ZeroDivisor,

    #[error("imaginary-axis pole at omega = {0}")]
    ImaginaryAxisPole(f64),

    #[error("degenerate: imaginary-axis zero at {0}")]
    BoundaryZero(Complex64),

    #[error("degenerate: boundary pole at {0}")]
    BoundaryPole(Complex64),

    #[error("transfer function is not proper")]
    NonProper,

    #[error("unstable: pole at {0}")]
    Unstable(Complex64),

    #[error("infinite gain ({0}); no finite witness exists")]
    InfiniteGain(InfiniteReason),

    #[error("Poisson integral hypothesis violated: {0}")]
    PoissonHypothesis(String),

    #[error("Poisson integral did not converge")]
    Divergent,

    #[error("signal grids differ")]
    GridMismatch,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a root sitting on (or numerically at) the
    /// imaginary axis.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::BoundaryZero(_) | Error::BoundaryPole(_) | Error::ImaginaryAxisPole(_)
        )
    }
}
