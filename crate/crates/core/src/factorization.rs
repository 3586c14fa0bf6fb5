//! Coprime factorization of transfer-function pairs and the
//! minimum-phase / all-pass split.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{root_factor, Polynomial};
use crate::transfer::{classify_roots, same_polynomial, TransferFunction, DEFAULT_CANCEL_TOL};

/// Which factorization the caller asked for. For SISO systems both give the
/// same factors; the tag only records intent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// Stable, proper factors sharing a denominator `m`:
/// `T1 = n_first / m`, `T2 = n_second / m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoprimePair {
    pub n_first: TransferFunction,
    pub n_second: TransferFunction,
    pub m: TransferFunction,
    pub side: Side,
}

impl CoprimePair {
    /// `n_second / n_first`: `N_p/N_r` for the attack pair, `N_d/N_f` for
    /// the fault pair.
    pub fn numerator_ratio(&self) -> Result<TransferFunction> {
        self.n_second.ratio(&self.n_first)
    }
}

/// Factorizes `t1`, `t2` over a common denominator.
///
/// With `d` the least common denominator, the stable denominator `q`
/// reflects every unstable root of `d` across the imaginary axis and keeps
/// the stable ones, so `m = d/q` is all-pass and `q` cancels from the
/// numerator ratio. The factors are assembled in reduced form from the roots
/// of the two denominators, which never expands `d` itself.
pub fn coprime_factorize(
    t1: &TransferFunction,
    t2: &TransferFunction,
    side: Side,
    axis_tol: f64,
) -> Result<CoprimePair> {
    if !t1.is_proper() || !t2.is_proper() {
        return Err(Error::NonProper);
    }
    let u1 = unstable_roots(t1.den(), axis_tol)?;
    let u2 = if same_polynomial(t1.den(), t2.den()) {
        u1.clone()
    } else {
        unstable_roots(t2.den(), axis_tol)?
    };
    let (only1, only2) = multiset_difference(&u1, &u2);
    let union: Vec<Complex64> = u1.iter().chain(&only2).copied().collect();
    let reflected: Vec<Complex64> = union.iter().map(|r| -r.conj()).collect();
    let q_extra = Polynomial::from_roots(&reflected, 1.0)?;

    let factor = |t: &TransferFunction, own: &[Complex64], missing: &[Complex64]| -> Result<TransferFunction> {
        let mut den = t.den().clone();
        for r in own.iter().filter(|r| r.im >= 0.0) {
            den = den.deflate(*r);
        }
        let num = t.num() * &Polynomial::from_roots(missing, 1.0)?;
        TransferFunction::new(num, &den * &q_extra)
    };
    Ok(CoprimePair {
        n_first: factor(t1, &u1, &only2)?,
        n_second: factor(t2, &u2, &only1)?,
        m: TransferFunction::new(Polynomial::from_roots(&union, 1.0)?, q_extra.clone())?,
        side,
    })
}

/// Roots of `d` in the open right half-plane; a root within `axis_tol` of
/// the imaginary axis is an error.
fn unstable_roots(d: &Polynomial, axis_tol: f64) -> Result<Vec<Complex64>> {
    if d.degree() == 0 {
        return Ok(Vec::new());
    }
    let cls = classify_roots(&d.roots()?, axis_tol);
    if let Some(&p) = cls.boundary.first() {
        return Err(Error::BoundaryPole(p));
    }
    Ok(cls.nmp)
}

/// `(a \ b, b \ a)` as multisets, matching roots closer than the
/// cancellation tolerance.
fn multiset_difference(a: &[Complex64], b: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut used = vec![false; a.len()];
    let mut b_only = Vec::new();
    for z in b {
        let hit = (0..a.len())
            .filter(|&i| !used[i])
            .map(|i| (i, (a[i] - z).norm()))
            .filter(|&(_, dist)| dist <= DEFAULT_CANCEL_TOL * z.norm().max(1.0))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match hit {
            Some((i, _)) => used[i] = true,
            None => b_only.push(*z),
        }
    }
    let a_only = a.iter().zip(&used).filter(|(_, &u)| !u).map(|(z, _)| *z).collect();
    (a_only, b_only)
}

/// `prod (s - z_i) / (s + conj(z_i))` over right-half-plane zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| !(z.re > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "Blaschke zero {z} is not in the open right half-plane"
            )));
        }
        Ok(BlaschkeProduct { zeros })
    }

    /// The empty product, identically 1.
    pub fn identity() -> Self {
        BlaschkeProduct::default()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let mut v = Complex64::new(1.0, 0.0);
        for z in &self.zeros {
            let den = s + z.conj();
            if den.norm() <= f64::EPSILON * z.norm() {
                return Err(Error::InvalidArgument(format!(
                    "evaluation at the Blaschke pole {}",
                    -z.conj()
                )));
            }
            v *= (s - z) / den;
        }
        Ok(v)
    }
}

/// `g = min_phase * blaschke`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllpassSplit {
    pub min_phase: TransferFunction,
    pub blaschke: BlaschkeProduct,
}

/// Extracts the right-half-plane zeros of `g` into a Blaschke product.
///
/// Each such zero `z` is replaced by its mirror image `-conj(z)` in the
/// minimum-phase factor, which leaves `|g(jw)|` unchanged.
pub fn allpass_split(g: &TransferFunction, axis_tol: f64) -> Result<AllpassSplit> {
    if !g.is_proper() {
        return Err(Error::NonProper);
    }
    if g.is_zero() {
        return Ok(AllpassSplit {
            min_phase: g.clone(),
            blaschke: BlaschkeProduct::identity(),
        });
    }
    let cls = g.classify_zeros(axis_tol)?;
    cls.require_no_boundary()?;
    let mut num = g.num().clone();
    for z in cls.nmp.iter().filter(|z| z.im >= 0.0) {
        num = num.deflate(*z);
        num = &num * &root_factor(-z.conj());
    }
    Ok(AllpassSplit {
        min_phase: TransferFunction::new(num, g.den().clone())?,
        blaschke: BlaschkeProduct::new(cls.nmp)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::DEFAULT_AXIS_TOL;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tf(zeros: &[f64], poles: &[f64], gain: f64) -> TransferFunction {
        let z: Vec<_> = zeros.iter().map(|&r| c(r, 0.0)).collect();
        let p: Vec<_> = poles.iter().map(|&r| c(r, 0.0)).collect();
        TransferFunction::from_roots(&z, &p, gain).unwrap()
    }

    fn assert_same_tf(a: &TransferFunction, b: &TransferFunction, tol: f64) {
        assert_eq!(a.num().degree(), b.num().degree(), "{a} vs {b}");
        assert_eq!(a.den().degree(), b.den().degree(), "{a} vs {b}");
        for (x, y) in a.num().coeffs().iter().zip(b.num().coeffs()) {
            assert!((x - y).abs() <= tol, "{a} vs {b}");
        }
        for (x, y) in a.den().coeffs().iter().zip(b.den().coeffs()) {
            assert!((x - y).abs() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn stable_pair_reflects_nothing() {
        let fr = tf(&[-0.1, -0.2, -0.6], &[-0.3, -0.4, -0.5], 1.0);
        let dr = tf(&[-1.0, 0.04, 20.0], &[-0.3, -0.4, -0.5], 1.0);
        let pair = coprime_factorize(&fr, &dr, Side::Left, DEFAULT_AXIS_TOL).unwrap();
        assert_eq!(pair.m, TransferFunction::constant(1.0));
        assert_same_tf(&pair.n_first, &fr, 1e-14);
        assert_same_tf(&pair.n_second, &dr, 1e-14);
        assert_eq!(pair.side, Side::Left);
        let ratio = pair.numerator_ratio().unwrap();
        assert_same_tf(&ratio, &tf(&[-1.0, 0.04, 20.0], &[-0.1, -0.2, -0.6], 1.0), 1e-12);
    }

    #[test]
    fn single_unstable_pole_is_reflected() {
        let t = tf(&[], &[1.0], 1.0);
        let pair = coprime_factorize(&t, &t, Side::Right, DEFAULT_AXIS_TOL).unwrap();
        assert_same_tf(&pair.m, &tf(&[1.0], &[-1.0], 1.0), 1e-14);
        assert_same_tf(&pair.n_first, &tf(&[], &[-1.0], 1.0), 1e-14);
        assert_eq!(pair.n_first, pair.n_second);
        assert_eq!(pair.numerator_ratio().unwrap(), TransferFunction::constant(1.0));
    }

    #[test]
    fn constant_pair() {
        let one = TransferFunction::constant(1.0);
        let pair = coprime_factorize(&one, &one, Side::Right, DEFAULT_AXIS_TOL).unwrap();
        assert_eq!(pair.m, one);
        assert_eq!(pair.n_first, one);
        assert_eq!(pair.n_second, one);
    }

    #[test]
    fn zero_second_numerator_gives_zero_ratio() {
        let t = tf(&[-1.0], &[-2.0], 1.0);
        let pair =
            coprime_factorize(&t, &TransferFunction::zero(), Side::Right, DEFAULT_AXIS_TOL).unwrap();
        assert!(pair.numerator_ratio().unwrap().is_zero());
    }

    #[test]
    fn factorization_errors() {
        let improper = TransferFunction::new(Polynomial::new(vec![0.0, 0.0, 1.0]), Polynomial::new(vec![1.0, 1.0])).unwrap();
        let ok = tf(&[], &[-1.0], 1.0);
        assert_eq!(
            coprime_factorize(&improper, &ok, Side::Right, DEFAULT_AXIS_TOL),
            Err(Error::NonProper)
        );
        let integrator = tf(&[], &[0.0], 1.0);
        assert!(matches!(
            coprime_factorize(&integrator, &ok, Side::Right, DEFAULT_AXIS_TOL),
            Err(Error::BoundaryPole(_))
        ));
    }

    #[test]
    fn unrelated_denominators_use_their_lcm() {
        let t1 = tf(&[-3.0], &[-1.0, 2.0], 1.0);
        let t2 = tf(&[], &[-1.0, -5.0], 2.0);
        let pair = coprime_factorize(&t1, &t2, Side::Right, DEFAULT_AXIS_TOL).unwrap();
        for f in [&pair.n_first, &pair.n_second, &pair.m] {
            assert!(f.is_stable(DEFAULT_AXIS_TOL).unwrap() && f.is_proper());
        }
        assert_same_tf(&pair.n_first.ratio(&pair.m).unwrap(), &t1, 1e-8);
        assert_same_tf(&pair.n_second.ratio(&pair.m).unwrap(), &t2, 1e-8);
    }

    #[test]
    fn blaschke_examples() {
        let b = BlaschkeProduct::new(vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(b.eval(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((b.eval(c(0.0, 2.0)).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!((b.eval(c(2.0, 0.0)).unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(b.eval(c(-1.0, 0.0)).is_err());
        assert!(BlaschkeProduct::new(vec![c(-1.0, 0.0)]).is_err());
        assert_eq!(BlaschkeProduct::identity().eval(c(3.0, 1.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn split_examples() {
        let g = tf(&[1.0], &[-2.0], 1.0);
        let split = allpass_split(&g, DEFAULT_AXIS_TOL).unwrap();
        assert_same_tf(&split.min_phase, &tf(&[-1.0], &[-2.0], 1.0), 1e-14);
        assert_eq!(split.blaschke.zeros(), &[c(1.0, 0.0)]);

        let mp = tf(&[-1.0, -3.0], &[-2.0, -4.0], 2.0);
        let split = allpass_split(&mp, DEFAULT_AXIS_TOL).unwrap();
        assert!(split.blaschke.is_empty());
        assert_eq!(split.min_phase, mp);

        let s_i = tf(&[-1.0, 0.04, 20.0], &[-0.1, -0.2, -0.6], 1.0);
        let split = allpass_split(&s_i, DEFAULT_AXIS_TOL).unwrap();
        assert_eq!(split.blaschke.zeros().len(), 2);
        assert_same_tf(&split.min_phase, &tf(&[-1.0, -0.04, -20.0], &[-0.1, -0.2, -0.6], 1.0), 1e-10);
    }

    #[test]
    fn split_rejects_axis_zero() {
        let g = TransferFunction::new(Polynomial::new(vec![1.0, 0.0, 1.0]), Polynomial::new(vec![2.0, 3.0, 1.0])).unwrap();
        assert!(matches!(allpass_split(&g, DEFAULT_AXIS_TOL), Err(Error::BoundaryZero(_))));
    }

    #[test]
    fn split_of_complex_nmp_pair() {
        let z = [c(0.5, 2.0), c(0.5, -2.0), c(-1.0, 0.0)];
        let p = [c(-1.0, 1.0), c(-1.0, -1.0), c(-3.0, 0.0)];
        let g = TransferFunction::from_roots(&z, &p, 1.5).unwrap();
        let split = allpass_split(&g, DEFAULT_AXIS_TOL).unwrap();
        assert_eq!(split.blaschke.zeros().len(), 2);
        assert!(split.min_phase.classify_zeros(DEFAULT_AXIS_TOL).unwrap().nmp.is_empty());
        for w in [0.0, 0.3, 1.0, 2.0, 7.0] {
            let s = c(0.0, w);
            let lhs = g.eval(s);
            let rhs = split.min_phase.eval(s) * split.blaschke.eval(s).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn blaschke_is_all_pass_on_the_axis(
            zs in prop::collection::vec((0.01f64..10.0, -10.0f64..10.0), 1..5),
            w in -100.0f64..100.0,
        ) {
            let b = BlaschkeProduct::new(zs.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap();
            prop_assert!((b.eval(c(0.0, w)).unwrap().norm() - 1.0).abs() <= 1e-12);
        }
    }
}
