//! Output-to-output and input-to-input gain metrics for SISO LTI systems.
//!
//! The crate computes the stealthy-attack (OOG) and undetectable-fault (IIG)
//! sensitivity metrics as H-infinity norms of coprime-numerator ratios,
//! bounds them from below through the non-minimum-phase zeros of the
//! sensitivity ratios, and builds time-domain witness signals that approach
//! the computed values.

pub mod eigen;
pub mod error;
pub mod extended;
pub mod factorization;
pub mod gains;
pub mod limits;
pub mod poly;
pub mod quadrature;
pub mod transfer;
pub mod witness;

pub use error::{Error, Result};
pub use factorization::{allpass_split, coprime_factorize, AllpassSplit, BlaschkeProduct, CoprimePair, Side};
pub use gains::{
    classical_bounds, h_minus_index, h_minus_index_peak, hinf_norm, iig_lower, oog, ClassicalBracket, GainReport,
    InfiniteReason, Orientation, Peak,
};
pub use limits::{nmp_limit_bound, poisson_integral, verify_limit_bound, LimitBound, LimitCheck, WitnessKind};
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use transfer::{TransferFunction, ZeroClassification, DEFAULT_AXIS_TOL, DEFAULT_CANCEL_TOL};
