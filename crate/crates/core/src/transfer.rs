//! Rational SISO transfer functions.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{root_factor, Polynomial};

/// Default half-width of the band around the imaginary axis in which zeros
/// and poles are treated as lying on it.
pub const DEFAULT_AXIS_TOL: f64 = 1e-7;

/// Default root-matching tolerance for pole/zero cancellation.
pub const DEFAULT_CANCEL_TOL: f64 = 1e-8;

/// Relative tolerance under which `|den(jw)|` counts as a pole on the axis.
const AXIS_POLE_RTOL: f64 = 1e-10;

/// `num(s) / den(s)` with `den` monic and no common roots.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    num: Polynomial,
    den: Polynomial,
}

impl fmt::Debug for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Zeros split by the sign of their real part.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroClassification {
    pub minimum_phase: Vec<Complex64>,
    pub nmp: Vec<Complex64>,
    pub boundary: Vec<Complex64>,
}

impl ZeroClassification {
    pub fn len(&self) -> usize {
        self.minimum_phase.len() + self.nmp.len() + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fails on the first zero inside the boundary band.
    pub fn require_no_boundary(&self) -> Result<()> {
        match self.boundary.first() {
            Some(&z) => Err(Error::BoundaryZero(z)),
            None => Ok(()),
        }
    }
}

/// Splits roots by real part against `axis_tol`.
pub fn classify_roots(roots: &[Complex64], axis_tol: f64) -> ZeroClassification {
    let mut c = ZeroClassification::default();
    for &z in roots {
        if z.re > axis_tol {
            c.nmp.push(z);
        } else if z.re < -axis_tol {
            c.minimum_phase.push(z);
        } else {
            c.boundary.push(z);
        }
    }
    c
}

impl TransferFunction {
    /// Builds `num/den`, cancelling shared roots within
    /// [`DEFAULT_CANCEL_TOL`] and normalizing `den` to be monic.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        Self::with_cancel_tol(num, den, DEFAULT_CANCEL_TOL)
    }

    pub fn with_cancel_tol(num: Polynomial, den: Polynomial, cancel_tol: f64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(TransferFunction::zero());
        }
        let (num, den) = cancel_common_roots(num, den, cancel_tol)?;
        let lead = den.leading();
        Ok(TransferFunction {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    /// Builds `gain * prod(s - z) / prod(s - p)`.
    pub fn from_roots(zeros: &[Complex64], poles: &[Complex64], gain: f64) -> Result<Self> {
        Self::new(
            Polynomial::from_roots(zeros, gain)?,
            Polynomial::from_roots(poles, 1.0)?,
        )
    }

    pub fn zero() -> Self {
        TransferFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: f64) -> Self {
        TransferFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_proper(&self) -> bool {
        self.num.degree() <= self.den.degree() || self.num.is_zero()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.num.is_zero() {
            return Err(Error::InvalidArgument("the zero transfer function has no zero set".into()));
        }
        if self.num.degree() == 0 {
            return Ok(Vec::new());
        }
        self.num.roots()
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        self.den.roots()
    }

    pub fn classify_zeros(&self, axis_tol: f64) -> Result<ZeroClassification> {
        Ok(classify_roots(&self.zeros()?, axis_tol))
    }

    pub fn classify_poles(&self, axis_tol: f64) -> Result<ZeroClassification> {
        Ok(classify_roots(&self.poles()?, axis_tol))
    }

    /// All poles strictly left of `-axis_tol`.
    pub fn is_stable(&self, axis_tol: f64) -> Result<bool> {
        Ok(self.poles()?.iter().all(|p| p.re < -axis_tol))
    }

    /// First pole with real part at or right of `-axis_tol`, if any.
    pub fn first_unstable_pole(&self, axis_tol: f64) -> Result<Option<Complex64>> {
        Ok(self.poles()?.into_iter().find(|p| p.re >= -axis_tol))
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// `T(jw)`.
    pub fn freq_response(&self, omega: f64) -> Result<Complex64> {
        let s = Complex64::new(0.0, omega);
        let d = self.den.eval(s);
        if d.norm() <= AXIS_POLE_RTOL * self.den.eval_scale(s) {
            return Err(Error::ImaginaryAxisPole(omega));
        }
        Ok(self.num.eval(s) / d)
    }

    /// `|T(jw)|` as `w -> inf`: leading-coefficient ratio when biproper,
    /// zero when strictly proper, infinite otherwise.
    pub fn high_frequency_gain(&self) -> f64 {
        if self.num.is_zero() {
            0.0
        } else if self.num.degree() < self.den.degree() {
            0.0
        } else if self.num.degree() == self.den.degree() {
            (self.num.leading() / self.den.leading()).abs()
        } else {
            f64::INFINITY
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return TransferFunction::zero();
        }
        TransferFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &TransferFunction) -> Result<Self> {
        TransferFunction::new(&self.num * &other.num, &self.den * &other.den)
    }

    /// `1 - T`, formed over the common denominator.
    pub fn one_minus(&self) -> Result<Self> {
        TransferFunction::new(&self.den - &self.num, self.den.clone())
    }

    /// `self / other`. Operands sharing a denominator reduce to the ratio
    /// of their numerators directly.
    pub fn ratio(&self, other: &TransferFunction) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(TransferFunction::zero());
        }
        if same_polynomial(&self.den, &other.den) {
            return TransferFunction::new(self.num.clone(), other.num.clone());
        }
        TransferFunction::new(&self.num * &other.den, &self.den * &other.num)
    }
}

/// Coefficientwise equality up to `1e-12` relative.
pub(crate) fn same_polynomial(a: &Polynomial, b: &Polynomial) -> bool {
    if a.degree() != b.degree() {
        return false;
    }
    let scale = a.max_abs_coeff().max(b.max_abs_coeff());
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .all(|(x, y)| (x - y).abs() <= 1e-12 * scale)
}

fn relative_residual(p: &Polynomial, s: Complex64) -> f64 {
    let scale = p.eval_scale(s);
    if scale == 0.0 {
        0.0
    } else {
        p.eval(s).norm() / scale
    }
}

/// Repeatedly removes the closest shared root pair.
///
/// Two roots are shared when they lie within `tol * max(1, |r|)` of each
/// other, or when each nearly annihilates the other polynomial (which
/// catches repeated roots that the eigen-solver splits by ~sqrt(eps)).
fn cancel_common_roots(
    mut num: Polynomial,
    mut den: Polynomial,
    tol: f64,
) -> Result<(Polynomial, Polynomial)> {
    let residual_tol = tol.powf(1.5);
    loop {
        if num.degree() == 0 || den.degree() == 0 {
            return Ok((num, den));
        }
        let zs = num.roots()?;
        let ps = den.roots()?;
        let mut best: Option<(f64, Complex64, Complex64)> = None;
        for &p in &ps {
            for &z in &zs {
                // Conjugate pairs are handled through their upper member.
                if p.im < 0.0 || z.im < 0.0 {
                    continue;
                }
                let d = (p - z).norm();
                let close = d <= tol * p.norm().max(1.0);
                let annihilating = relative_residual(&num, p) <= residual_tol
                    && relative_residual(&den, z) <= residual_tol;
                if (close || annihilating) && best.map_or(true, |(bd, _, _)| d < bd) {
                    best = Some((d, p, z));
                }
            }
        }
        let Some((_, p, z)) = best else {
            return Ok((num, den));
        };
        let mut shared = 0.5 * (p + z);
        if p.im == 0.0 || z.im == 0.0 {
            // Real root in either polynomial: cancel a single real factor.
            shared = Complex64::new(shared.re, 0.0);
        }
        let factor = root_factor(shared);
        num = num.div_rem(&factor).0;
        den = den.div_rem(&factor).0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly(roots: &[f64]) -> Polynomial {
        Polynomial::from_roots(&roots.iter().map(|&r| c(r)).collect::<Vec<_>>(), 1.0).unwrap()
    }

    fn t_fr() -> TransferFunction {
        TransferFunction::new(poly(&[-0.1, -0.2, -0.6]), poly(&[-0.3, -0.4, -0.5])).unwrap()
    }

    fn t_dr(tau: f64) -> TransferFunction {
        TransferFunction::new(poly(&[-1.0, 0.04, tau]), poly(&[-0.3, -0.4, -0.5])).unwrap()
    }

    #[test]
    fn exact_cancellation() {
        let t = TransferFunction::new(poly(&[-1.0, -2.0]), poly(&[-2.0, -3.0])).unwrap();
        assert_eq!(t.num().degree(), 1);
        assert!((t.num().coeffs()[0] - 1.0).abs() < 1e-12);
        assert!((t.den().coeffs()[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_root_cancels_once() {
        let t = TransferFunction::new(poly(&[-2.0, -2.0]), poly(&[-2.0, -3.0])).unwrap();
        assert_eq!(t.num().degree(), 1);
        assert_eq!(t.den().degree(), 1);
        assert!((t.eval(c(1.0)) - c(3.0 / 4.0)).norm() < 1e-12);
    }

    #[test]
    fn section4_fault_channel_is_unchanged() {
        let t = t_fr();
        assert_eq!(t.num().degree(), 3);
        assert_eq!(t.den().degree(), 3);
    }

    #[test]
    fn zero_numerator_and_denominator() {
        let t = TransferFunction::new(Polynomial::zero(), Polynomial::new(vec![1.0, 1.0])).unwrap();
        assert!(t.is_zero());
        assert_eq!(
            TransferFunction::new(Polynomial::one(), Polynomial::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn construction_is_idempotent() {
        let t = t_dr(20.0);
        let again = TransferFunction::new(t.num().clone(), t.den().clone()).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn zero_classification() {
        let z = t_dr(20.0).classify_zeros(DEFAULT_AXIS_TOL).unwrap();
        assert_eq!(z.nmp.len(), 2);
        assert!((z.nmp[0] - c(0.04)).norm() < 1e-12 && (z.nmp[1] - c(20.0)).norm() < 1e-10);
        assert!(t_fr().classify_zeros(DEFAULT_AXIS_TOL).unwrap().nmp.is_empty());
        let origin = TransferFunction::new(Polynomial::new(vec![0.0, 1.0]), poly(&[-1.0])).unwrap();
        let z = origin.classify_zeros(DEFAULT_AXIS_TOL).unwrap();
        assert_eq!(z.boundary, vec![c(0.0)]);
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn frequency_response() {
        assert!((t_fr().freq_response(0.0).unwrap() - c(0.2)).norm() < 1e-14);
        assert_eq!(TransferFunction::constant(1.0).freq_response(7.0).unwrap(), c(1.0));
        assert_eq!(t_fr().high_frequency_gain(), 1.0);
        assert!((t_fr().freq_response(1e7).unwrap().norm() - 1.0).abs() < 1e-6);
        let osc = TransferFunction::new(Polynomial::one(), Polynomial::new(vec![4.0, 0.0, 1.0])).unwrap();
        assert_eq!(osc.freq_response(2.0), Err(Error::ImaginaryAxisPole(2.0)));
    }

    #[test]
    fn properness_and_stability() {
        let improper = TransferFunction::new(Polynomial::new(vec![1.0, 0.0, 1.0]), poly(&[-1.0])).unwrap();
        assert!(!improper.is_proper());
        assert!(t_fr().is_proper());
        assert!(t_fr().is_stable(DEFAULT_AXIS_TOL).unwrap());
        let unstable = TransferFunction::new(Polynomial::one(), poly(&[1.0])).unwrap();
        assert!(!unstable.is_stable(DEFAULT_AXIS_TOL).unwrap());
    }

    #[test]
    fn ratio_with_shared_denominator() {
        let r = t_dr(20.0).ratio(&t_fr()).unwrap();
        let expected =
            TransferFunction::new(poly(&[-1.0, 0.04, 20.0]), poly(&[-0.1, -0.2, -0.6])).unwrap();
        for (a, b) in r.num().coeffs().iter().zip(expected.num().coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in r.den().coeffs().iter().zip(expected.den().coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_examples() {
        let t = t_dr(20.0);
        assert_eq!(t.ratio(&t).unwrap(), TransferFunction::constant(1.0));
        let a = TransferFunction::new(Polynomial::one(), poly(&[-1.0])).unwrap();
        let b = TransferFunction::new(Polynomial::one(), poly(&[-2.0])).unwrap();
        let r = a.ratio(&b).unwrap();
        assert_eq!(r.num().coeffs(), &[2.0, 1.0]);
        assert_eq!(r.den().coeffs(), &[1.0, 1.0]);
        assert_eq!(a.ratio(&TransferFunction::zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn ratio_magnitude_identity() {
        let a = t_dr(-3.0);
        let b = TransferFunction::new(poly(&[-0.7, 2.0]), poly(&[-1.0, -4.0, -9.0])).unwrap();
        let r = a.ratio(&b).unwrap();
        for w in [0.0, 0.05, 0.5, 1.3, 10.0, 300.0] {
            let lhs = r.freq_response(w).unwrap().norm();
            let rhs = a.freq_response(w).unwrap().norm() / b.freq_response(w).unwrap().norm();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        }
    }

    #[test]
    fn one_minus_has_expected_zeros() {
        // S = 3(s-1)/(s+1) gives 1 - S = (-2s + 4)/(s+1), zero at 2.
        let s = TransferFunction::new(poly(&[1.0]).scale(3.0), poly(&[-1.0])).unwrap();
        let p = s.one_minus().unwrap();
        let z = p.zeros().unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - c(2.0)).norm() < 1e-14);
    }
}
