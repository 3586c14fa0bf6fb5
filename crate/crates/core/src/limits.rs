//! Lower bounds on `||S||_inf` forced by non-minimum-phase zeros.
//!
//! For a proper sensitivity ratio `S` and its complement `P = 1 - S`, with
//! right-half-plane zero sets `Z_S`, `Z_P` and Blaschke products `B_S`, `B_P`:
//!
//! ```text
//! ||S||_inf >= max { |B_S(b)|^-1 : b in Z_P } U { |B_P(a)|^-1 - 1 : a in Z_S }
//! ```
//!
//! At a zero `b` of `P` we have `S(b) = 1`, so the minimum-phase part of `S`
//! equals `B_S(b)^-1` there; the Poisson integral of `log|S̃(jw)|` reproduces
//! that value, which [`verify_limit_bound`] checks by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{allpass_split, BlaschkeProduct};
use crate::gains::{hinf_norm, Peak};
use crate::quadrature::{adaptive_simpson, DEFAULT_MAX_DEPTH};
use crate::transfer::TransferFunction;

pub const DEFAULT_POISSON_RTOL: f64 = 1e-10;

/// Agreement required between the quadrature and closed-form log values.
pub const POISSON_AGREEMENT_TOL: f64 = 1e-7;

/// Slack allowed when comparing the bound against the computed norm.
pub const DOMINANCE_SLACK: f64 = 1e-9;

/// Which term produced the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `|B_S(b)|^-1` at a zero `b` of `P`.
    CrossEvaluationSAtPZero,
    /// `|B_P(a)|^-1 - 1` at a zero `a` of `S`.
    CrossEvaluationPAtSZero,
    /// One of the zero sets is empty.
    TrivialOne,
    /// `S` is not proper.
    InfiniteNonProper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitBound {
    #[serde(with = "crate::extended")]
    pub bound: f64,
    pub witness_kind: WitnessKind,
    pub witness_zero: Option<Complex64>,
    /// Right-half-plane zeros of `S`.
    pub s_nmp: Vec<Complex64>,
    /// Right-half-plane zeros of `1 - S`.
    pub p_nmp: Vec<Complex64>,
}

fn nmp_zeros(t: &TransferFunction, axis_tol: f64) -> Result<Vec<Complex64>> {
    if t.is_zero() {
        return Ok(Vec::new());
    }
    let cls = t.classify_zeros(axis_tol)?;
    cls.require_no_boundary()?;
    Ok(cls.nmp)
}

/// Lower bound on `||S||_inf` from the zeros of `S` and `1 - S`.
///
/// When either zero set is empty the bound is 1. That value is a true lower
/// bound only if `Z_P` is nonempty or `|S(j inf)| >= 1` (as for a ratio of
/// numerators with equal leading coefficients); a small `S` without zeros of
/// `1 - S` in the right half-plane can have norm below 1.
pub fn nmp_limit_bound(s: &TransferFunction, axis_tol: f64) -> Result<LimitBound> {
    if !s.is_proper() {
        return Ok(LimitBound {
            bound: f64::INFINITY,
            witness_kind: WitnessKind::InfiniteNonProper,
            witness_zero: None,
            s_nmp: Vec::new(),
            p_nmp: Vec::new(),
        });
    }
    let p = s.one_minus()?;
    let s_nmp = nmp_zeros(s, axis_tol)?;
    let p_nmp = nmp_zeros(&p, axis_tol)?;

    let mut out = LimitBound {
        bound: 1.0,
        witness_kind: WitnessKind::TrivialOne,
        witness_zero: None,
        s_nmp,
        p_nmp,
    };
    if out.s_nmp.is_empty() || out.p_nmp.is_empty() {
        return Ok(out);
    }

    let b_s = BlaschkeProduct::new(out.s_nmp.clone())?;
    let b_p = BlaschkeProduct::new(out.p_nmp.clone())?;
    let mut best = f64::NEG_INFINITY;
    for &beta in &out.p_nmp {
        let v = 1.0 / b_s.eval(beta)?.norm();
        if v > best {
            best = v;
            out.witness_kind = WitnessKind::CrossEvaluationSAtPZero;
            out.witness_zero = Some(beta);
        }
    }
    for &alpha in &out.s_nmp {
        let v = 1.0 / b_p.eval(alpha)?.norm() - 1.0;
        if v > best {
            best = v;
            out.witness_kind = WitnessKind::CrossEvaluationPAtSZero;
            out.witness_zero = Some(alpha);
        }
    }
    out.bound = best;
    Ok(out)
}

/// `(1/pi) * integral of log|f(jw)| * s0.re / (s0.re^2 + (w - s0.im)^2) dw`.
///
/// The real line is mapped to `(-pi/2, pi/2)` by `w = s0.im + s0.re * tan(theta)`,
/// which turns the kernel into the constant `1/pi`, and then to `[-1, 1]` by
/// `theta = (pi/2) * (3t - t^3)/2`. The second map has zero derivative at the
/// ends, so the logarithmic singularity of a strictly proper `f` is damped to
/// an integrable zero.
pub fn poisson_integral(
    f: &TransferFunction,
    s0: Complex64,
    rel_tol: f64,
    axis_tol: f64,
) -> Result<f64> {
    if !(s0.re > 0.0) || !s0.is_finite() {
        return Err(Error::PoissonHypothesis(format!(
            "evaluation point {s0} is not in the open right half-plane"
        )));
    }
    if f.is_zero() {
        return Err(Error::PoissonHypothesis("log of the zero function".into()));
    }
    if !f.is_proper() {
        return Err(Error::PoissonHypothesis("function is unbounded (not proper)".into()));
    }
    if let Some(p) = f.first_unstable_pole(axis_tol)? {
        return Err(Error::PoissonHypothesis(format!("pole at {p} is not in the open left half-plane")));
    }
    let zeros = f.classify_zeros(axis_tol)?;
    zeros.require_no_boundary()?;
    if let Some(z) = zeros.nmp.first() {
        return Err(Error::PoissonHypothesis(format!(
            "right-half-plane zero at {z}; split off the all-pass factor first"
        )));
    }

    let (sigma, omega0) = (s0.re, s0.im);
    let integrand = |t: f64| {
        let dtheta = 0.75 * PI * (1.0 - t * t);
        if dtheta <= 0.0 {
            return 0.0;
        }
        let theta = 0.25 * PI * (3.0 * t - t * t * t);
        let w = omega0 + sigma * theta.tan();
        let mag = f.eval(Complex64::new(0.0, w)).norm();
        mag.ln() * dtheta / PI
    };
    adaptive_simpson(integrand, -1.0, 1.0, rel_tol, DEFAULT_MAX_DEPTH)
}

/// Result of checking the limitation bound against the computed norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub bound: LimitBound,
    pub hinf: Peak,
    /// `||S||_inf - bound`.
    #[serde(with = "crate::extended")]
    pub slack: f64,
    /// `bound <= ||S||_inf + 1e-9`.
    pub holds: bool,
    /// Largest `|quadrature - closed form|` over all cross-evaluation points,
    /// on the log scale. Zero when no cross point exists.
    pub poisson_deviation: f64,
    pub poisson_agrees: bool,
}

/// Recomputes the bound, compares it with `||S||_inf`, and re-derives every
/// cross-evaluation term through the Poisson integral.
pub fn verify_limit_bound(s: &TransferFunction, axis_tol: f64) -> Result<LimitCheck> {
    let bound = nmp_limit_bound(s, axis_tol)?;
    let hinf = hinf_norm(s, axis_tol)?;
    let slack = hinf.value - bound.bound;
    let holds = bound.bound <= hinf.value + DOMINANCE_SLACK;

    let mut deviation: f64 = 0.0;
    if bound.witness_kind != WitnessKind::InfiniteNonProper {
        let p = s.one_minus()?;
        let b_s = BlaschkeProduct::new(bound.s_nmp.clone())?;
        let b_p = BlaschkeProduct::new(bound.p_nmp.clone())?;
        if !bound.p_nmp.is_empty() {
            // S(b) = 1 at every zero of P, so log|S̃(b)| = -log|B_S(b)|.
            let s_mp = allpass_split(s, axis_tol)?.min_phase;
            for &beta in &bound.p_nmp {
                let q = poisson_integral(&s_mp, beta, DEFAULT_POISSON_RTOL, axis_tol)?;
                let closed = -b_s.eval(beta)?.norm().ln();
                deviation = deviation.max((q - closed).abs());
            }
        }
        if !bound.s_nmp.is_empty() && !p.is_zero() {
            let p_mp = allpass_split(&p, axis_tol)?.min_phase;
            for &alpha in &bound.s_nmp {
                let q = poisson_integral(&p_mp, alpha, DEFAULT_POISSON_RTOL, axis_tol)?;
                let closed = -b_p.eval(alpha)?.norm().ln();
                deviation = deviation.max((q - closed).abs());
            }
        }
    }

    Ok(LimitCheck {
        bound,
        hinf,
        slack,
        holds,
        poisson_deviation: deviation,
        poisson_agrees: deviation <= POISSON_AGREEMENT_TOL,
    })
}
