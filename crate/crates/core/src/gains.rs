//! H-infinity norm, H-minus index, and the OOG / IIG gain metrics.
//!
//! Norms of SISO rational functions are computed exactly from the
//! stationary points of `|G(jw)|^2`, written as a ratio of polynomials in
//! `x = w^2`; no frequency grid is involved.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{coprime_factorize, Side};
use crate::transfer::TransferFunction;

/// Why a gain came out infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteReason {
    /// The numerator ratio is not proper; its magnitude grows without bound.
    NonProper,
    /// The residual-side numerator has a right-half-plane zero that the other
    /// numerator does not share.
    UnsharedNmpZeroInDivisor,
}

impl fmt::Display for InfiniteReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfiniteReason::NonProper => "non_proper",
            InfiniteReason::UnsharedNmpZeroInDivisor => "unshared_nmp_zero_in_divisor",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Attack pair `(T_ayr, T_ayp)`; metric `||N_p/N_r||^2`.
    Oog,
    /// Fault pair `(T_fr, T_dr)`; metric `4 ||N_d/N_f||^2`.
    Iig,
}

/// Supremum (or infimum) of `|G(jw)|` and where it is attained.
/// `omega` is `inf` when the extremum is the high-frequency limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    #[serde(with = "crate::extended")]
    pub value: f64,
    #[serde(with = "crate::extended")]
    pub omega: f64,
}

/// Squared classical bracket `||T2||^2/||T1||^2 <= ratio^2 <= ||T2||^2/||T1||_-^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBracket {
    pub lo: f64,
    #[serde(with = "crate::extended")]
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub orientation: Orientation,
    /// `||N_p/N_r||_inf` or `||N_d/N_f||_inf`.
    #[serde(with = "crate::extended")]
    pub hinf_ratio: f64,
    /// Frequency of the peak; `inf` for a high-frequency supremum, `nan` when
    /// the gain is infinite without a peak frequency.
    #[serde(with = "crate::extended")]
    pub peak_omega: f64,
    /// `hinf_ratio^2`.
    #[serde(with = "crate::extended")]
    pub oog: f64,
    /// `4 * hinf_ratio^2`.
    #[serde(with = "crate::extended")]
    pub iig_lower: f64,
    /// Present when both channels are stable.
    pub classical: Option<ClassicalBracket>,
    pub infinite_reason: Option<InfiniteReason>,
    /// The numerator ratio after cancellation.
    pub ratio: TransferFunction,
}

impl GainReport {
    /// The metric matching the orientation: `oog` or `iig_lower`.
    pub fn metric(&self) -> f64 {
        match self.orientation {
            Orientation::Oog => self.oog,
            Orientation::Iig => self.iig_lower,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.infinite_reason.is_none()
    }
}

/// Frequencies at which `|G(jw)|` can attain an interior extremum, plus `0`.
///
/// With `A(x) = |num(jw)|^2` and `B(x) = |den(jw)|^2`, stationary points
/// solve `A'B - AB' = 0`. Every root with positive real part is returned
/// (complex ones included): extra candidates cannot change a max or min
/// taken over true evaluations, and near-double real roots that rounding
/// pushed off the real line are kept.
fn candidate_frequencies(g: &TransferFunction) -> Result<Vec<f64>> {
    let a = g.num().squared_magnitude_in_w2();
    let b = g.den().squared_magnitude_in_w2();
    let f = (&a.derivative() * &b).sub_cancelling(&(&a * &b.derivative()));
    let mut out = vec![0.0];
    if f.degree() == 0 {
        return Ok(out);
    }
    for x in f.roots()? {
        if x.re > 0.0 && x.re.is_finite() {
            out.push(x.re.sqrt());
        }
    }
    Ok(out)
}

fn magnitude(g: &TransferFunction, omega: f64) -> Result<f64> {
    Ok(g.freq_response(omega)?.norm())
}

/// `||G||_inf` with its peak frequency.
///
/// Non-proper `G` gives `(inf, inf)`; a pole with real part at or above
/// `-axis_tol` is an error.
pub fn hinf_norm(g: &TransferFunction, axis_tol: f64) -> Result<Peak> {
    if g.is_zero() {
        return Ok(Peak { value: 0.0, omega: 0.0 });
    }
    if !g.is_proper() {
        return Ok(Peak {
            value: f64::INFINITY,
            omega: f64::INFINITY,
        });
    }
    if let Some(p) = g.first_unstable_pole(axis_tol)? {
        return Err(Error::Unstable(p));
    }
    let mut best = Peak {
        value: f64::NEG_INFINITY,
        omega: 0.0,
    };
    for w in candidate_frequencies(g)? {
        let v = magnitude(g, w)?;
        if v > best.value {
            best = Peak { value: v, omega: w };
        }
    }
    let at_infinity = g.high_frequency_gain();
    if at_infinity > best.value {
        best = Peak {
            value: at_infinity,
            omega: f64::INFINITY,
        };
    }
    Ok(best)
}

/// `inf_w |G(jw)|` with its location.
pub fn h_minus_index_peak(g: &TransferFunction, axis_tol: f64) -> Result<Peak> {
    if !g.is_proper() {
        return Err(Error::NonProper);
    }
    if let Some(p) = g.first_unstable_pole(axis_tol)? {
        return Err(Error::Unstable(p));
    }
    if g.is_zero() {
        return Ok(Peak { value: 0.0, omega: 0.0 });
    }
    if g.is_strictly_proper() {
        return Ok(Peak {
            value: 0.0,
            omega: f64::INFINITY,
        });
    }
    if let Some(z) = g.classify_zeros(axis_tol)?.boundary.first() {
        return Ok(Peak {
            value: 0.0,
            omega: z.im.abs(),
        });
    }
    let mut best = Peak {
        value: g.high_frequency_gain(),
        omega: f64::INFINITY,
    };
    for w in candidate_frequencies(g)? {
        let v = magnitude(g, w)?;
        if v <= best.value {
            best = Peak { value: v, omega: w };
        }
    }
    Ok(best)
}

/// `||G||_-`, the smallest gain over all frequencies.
pub fn h_minus_index(g: &TransferFunction, axis_tol: f64) -> Result<f64> {
    Ok(h_minus_index_peak(g, axis_tol)?.value)
}

/// Squared bracket built from the individual channels:
/// `(||second||^2 / ||first||^2, ||second||^2 / ||first||_-^2)`.
pub fn classical_bounds(
    first: &TransferFunction,
    second: &TransferFunction,
    axis_tol: f64,
) -> Result<ClassicalBracket> {
    if !first.is_proper() || !second.is_proper() {
        return Err(Error::NonProper);
    }
    if first.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let top = hinf_norm(second, axis_tol)?.value.powi(2);
    let first_hinf = hinf_norm(first, axis_tol)?.value;
    let first_hminus = h_minus_index(first, axis_tol)?;
    let hi = if first_hminus == 0.0 {
        f64::INFINITY
    } else {
        top / first_hminus.powi(2)
    };
    Ok(ClassicalBracket {
        lo: top / first_hinf.powi(2),
        hi,
    })
}

fn analyze_pair(
    first: &TransferFunction,
    second: &TransferFunction,
    orientation: Orientation,
    axis_tol: f64,
) -> Result<GainReport> {
    let side = match orientation {
        Orientation::Oog => Side::Right,
        Orientation::Iig => Side::Left,
    };
    let pair = coprime_factorize(first, second, side, axis_tol)?;
    let ratio = pair.numerator_ratio()?;

    let classical = if first.is_stable(axis_tol)? && second.is_stable(axis_tol)? {
        Some(classical_bounds(first, second, axis_tol)?)
    } else {
        None
    };

    // Poles of the ratio are the divisor's zeros left after cancellation.
    let poles = ratio.classify_poles(axis_tol)?;
    if let Some(&z) = poles.boundary.first() {
        return Err(Error::BoundaryZero(z));
    }
    let infinite_reason = if !poles.nmp.is_empty() {
        Some(InfiniteReason::UnsharedNmpZeroInDivisor)
    } else if !ratio.is_proper() {
        Some(InfiniteReason::NonProper)
    } else {
        None
    };

    let peak = match infinite_reason {
        Some(InfiniteReason::UnsharedNmpZeroInDivisor) => Peak {
            value: f64::INFINITY,
            omega: f64::NAN,
        },
        Some(InfiniteReason::NonProper) => Peak {
            value: f64::INFINITY,
            omega: f64::INFINITY,
        },
        None => hinf_norm(&ratio, axis_tol)?,
    };
    let squared = peak.value * peak.value;
    Ok(GainReport {
        orientation,
        hinf_ratio: peak.value,
        peak_omega: peak.omega,
        oog: squared,
        iig_lower: 4.0 * squared,
        classical,
        infinite_reason,
        ratio,
    })
}

/// Output-to-output gain of the attack pair: `||N_p/N_r||^2`.
pub fn oog(
    t_ayr: &TransferFunction,
    t_ayp: &TransferFunction,
    axis_tol: f64,
) -> Result<GainReport> {
    analyze_pair(t_ayr, t_ayp, Orientation::Oog, axis_tol)
}

/// Lower bound on the input-to-input gain of the fault pair,
/// `4 ||N_d/N_f||^2`. The disturbance scaling is fixed at 2.
pub fn iig_lower(
    t_fr: &TransferFunction,
    t_dr: &TransferFunction,
    axis_tol: f64,
) -> Result<GainReport> {
    analyze_pair(t_fr, t_dr, Orientation::Iig, axis_tol)
}
