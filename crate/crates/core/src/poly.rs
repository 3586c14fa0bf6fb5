//! Real-coefficient univariate polynomials.
//!
//! Coefficients are stored in ascending degree order: `coeffs[k]` multiplies
//! `s^k`. The zero polynomial is the single coefficient `0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};

/// Relative threshold used when trimming leading coefficients after ring
/// operations.
pub const TRIM_RTOL: f64 = 1e-12;

/// Tolerance used to decide that two roots form a conjugate pair.
pub const PAIRING_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a == 1.0 => write!(f, "s")?,
                1 => write!(f, "{a}*s")?,
                _ if a == 1.0 => write!(f, "s^{k}")?,
                _ => write!(f, "{a}*s^{k}")?,
            }
        }
        Ok(())
    }
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients. Exact trailing zeros
    /// are removed; an empty vector gives the zero polynomial.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn one() -> Self {
        Polynomial::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `s - r` for real `r`.
    pub fn linear_root(r: f64) -> Self {
        Polynomial { coeffs: vec![-r, 1.0] }
    }

    /// Real polynomial with the given roots and leading coefficient.
    ///
    /// Non-real roots must come with their conjugates (within
    /// [`PAIRING_TOL`]).
    pub fn from_roots(roots: &[Complex64], leading: f64) -> Result<Self> {
        let mut used = vec![false; roots.len()];
        let mut p = Polynomial::constant(leading);
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let r = roots[i];
            let tol = PAIRING_TOL * r.norm().max(1.0);
            if r.im.abs() <= tol {
                p = &p * &Polynomial::linear_root(r.re);
                continue;
            }
            let partner = (0..roots.len())
                .filter(|&j| !used[j])
                .map(|j| (j, (roots[j] - r.conj()).norm()))
                .filter(|&(_, d)| d <= tol)
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(j, _)| j)
                .ok_or(Error::UnpairedComplexRoot(r))?;
            used[partner] = true;
            let re = 0.5 * (r.re + roots[partner].re);
            let im = 0.5 * (r.im.abs() + roots[partner].im.abs());
            p = &p * &Polynomial::new(vec![re * re + im * im, -2.0 * re, 1.0]);
        }
        Ok(p)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value together with its first derivative, both at `s`.
    fn eval_with_derivative(&self, s: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * s + p;
            p = p * s + c;
        }
        (p, dp)
    }

    /// Sum of `|c_k| * |s|^k`; the natural scale of rounding error in
    /// [`Polynomial::eval`].
    pub fn eval_scale(&self, s: Complex64) -> f64 {
        let r = s.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `self - rhs`, dropping a leading coefficient only when it cancelled
    /// down to `1e-12` of the operand coefficients it came from. Unlike the
    /// ring subtraction, small but genuine leading terms of polynomials with
    /// a wide coefficient range survive.
    pub fn sub_cancelling(&self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let a = |k: usize| *self.coeffs.get(k).unwrap_or(&0.0);
        let b = |k: usize| *rhs.coeffs.get(k).unwrap_or(&0.0);
        let mut coeffs: Vec<f64> = (0..n).map(|k| a(k) - b(k)).collect();
        while let Some(&last) = coeffs.last() {
            let k = coeffs.len() - 1;
            if k == 0 || last.abs() > TRIM_RTOL * a(k).abs().max(b(k).abs()) {
                break;
            }
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// Divides by a monic polynomial, returning quotient and remainder.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dn = divisor.degree();
        let lead = divisor.leading();
        if self.degree() < dn || self.is_zero() {
            return (Polynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - dn + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dn] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
        }
        rem.truncate(dn.max(1));
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Removes the factor `(s - r)` (or the real quadratic of the conjugate
    /// pair when `r` is not real), discarding the remainder.
    pub fn deflate(&self, r: Complex64) -> Polynomial {
        self.div_rem(&root_factor(r)).0
    }

    /// All complex roots with multiplicity.
    ///
    /// Eigenvalues of the balanced companion matrix, each refined by one
    /// Newton step. Conjugate pairs are adjacent, with the positive imaginary
    /// part first; the order is otherwise by increasing real part.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.degree() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        // Exact zero roots are peeled off so they are reported exactly.
        let zeros_at_origin = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        let reduced = &self.coeffs[zeros_at_origin..];
        let n = reduced.len() - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
        if n == 0 {
            return Ok(out);
        }
        let lead = reduced[n];
        let raw = if n == 1 {
            vec![Complex64::new(-reduced[0] / lead, 0.0)]
        } else {
            // Upper Hessenberg companion: subdiagonal of ones, last column
            // holds the negated monic coefficients.
            let mut rows = vec![vec![0.0; n]; n];
            for i in 1..n {
                rows[i][i - 1] = 1.0;
            }
            for (i, row) in rows.iter_mut().enumerate() {
                row[n - 1] = -reduced[i] / lead;
            }
            eigen::hessenberg_eigenvalues(&rows)?
        };

        let poly = Polynomial::new(reduced.to_vec());
        let mut roots = Vec::with_capacity(n);
        let mut i = 0;
        while i < raw.len() {
            let r = raw[i];
            if r.im == 0.0 {
                roots.push(Complex64::new(poly.polish(r).re, 0.0));
                i += 1;
            } else {
                // The QR sweep emits conjugate pairs back to back.
                let upper = if r.im > 0.0 { r } else { r.conj() };
                let z = poly.polish(upper);
                let z = Complex64::new(z.re, z.im.abs());
                roots.push(z);
                roots.push(z.conj());
                i += 2;
            }
        }
        order_roots(&mut roots);
        out.extend(roots);
        Ok(out)
    }

    /// One Newton step, kept only if it reduces the residual.
    fn polish(&self, r: Complex64) -> Complex64 {
        let (p, dp) = self.eval_with_derivative(r);
        if dp.norm() == 0.0 || !p.is_finite() {
            return r;
        }
        let candidate = r - p / dp;
        if candidate.is_finite() && self.eval(candidate).norm() <= p.norm() {
            candidate
        } else {
            r
        }
    }

    /// Even/odd split used for `|p(jw)|^2`: returns `(re, im)` with
    /// `p(jw) = re(w^2) + j*w*im(w^2)`.
    pub fn imaginary_axis_parts(&self) -> (Polynomial, Polynomial) {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even.push(sign * c);
            } else {
                odd.push(sign * c);
            }
        }
        (Polynomial::new(even), Polynomial::new(odd))
    }

    /// `|p(jw)|^2` as a polynomial in `x = w^2`.
    pub fn squared_magnitude_in_w2(&self) -> Polynomial {
        let (re, im) = self.imaginary_axis_parts();
        let re2 = &re * &re;
        let im2 = &im * &im;
        let n = re2.coeffs.len().max(im2.coeffs.len() + 1);
        let mut coeffs = vec![0.0; n];
        for (k, c) in re2.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in im2.coeffs.iter().enumerate() {
            coeffs[k + 1] += c;
        }
        Polynomial::new(coeffs)
    }
}

/// Sorts roots by real part while keeping each conjugate pair adjacent.
fn order_roots(roots: &mut Vec<Complex64>) {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut i = 0;
    while i < roots.len() {
        if roots[i].im != 0.0 && i + 1 < roots.len() {
            groups.push(vec![roots[i], roots[i + 1]]);
            i += 2;
        } else {
            groups.push(vec![roots[i]]);
            i += 1;
        }
    }
    groups.sort_by(|a, b| {
        a[0].re
            .total_cmp(&b[0].re)
            .then(a[0].im.abs().total_cmp(&b[0].im.abs()))
    });
    *roots = groups.into_iter().flatten().collect();
}

/// `(s - r)` for real `r`, else the monic real quadratic with roots `r, r̄`.
pub fn root_factor(r: Complex64) -> Polynomial {
    if r.im == 0.0 {
        Polynomial::linear_root(r.re)
    } else {
        Polynomial::new(vec![r.norm_sqr(), -2.0 * r.re, 1.0])
    }
}

fn trimmed(mut coeffs: Vec<f64>) -> Polynomial {
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let threshold = TRIM_RTOL * max;
    while coeffs.len() > 1 && coeffs.last().unwrap().abs() <= threshold {
        coeffs.pop();
    }
    if coeffs.len() == 1 && coeffs[0].abs() <= threshold {
        coeffs[0] = 0.0;
    }
    Polynomial::new(coeffs)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        trimmed(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) - rhs.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        trimmed(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn section4_den() -> Polynomial {
        Polynomial::new(vec![0.06, 0.47, 1.2, 1.0])
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Polynomial::constant(1.0).eval(c(3.0, 4.0)), c(1.0, 0.0));
        assert!((section4_den().eval(c(0.0, 0.0)) - c(0.06, 0.0)).norm() < 1e-15);
        assert_eq!(Polynomial::new(vec![-0.3, 1.0]).eval(c(0.3, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn hand_expansion_matches_from_roots() {
        // (s+0.3)(s+0.4)(s+0.5) = s^3 + 1.2 s^2 + 0.47 s + 0.06
        let p = Polynomial::from_roots(&[c(-0.3, 0.0), c(-0.4, 0.0), c(-0.5, 0.0)], 1.0).unwrap();
        for (a, b) in p.coeffs().iter().zip(section4_den().coeffs()) {
            assert!((a - b).abs() < 1e-15);
        }
        // (s+1)(s-0.04)(s-20) = s^3 - 19.04 s^2 - 19.24 s + 0.8
        let q = Polynomial::from_roots(&[c(0.04, 0.0), c(20.0, 0.0), c(-1.0, 0.0)], 1.0).unwrap();
        let expected = [0.8, -19.24, -19.04, 1.0];
        for (a, b) in q.coeffs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{q:?}");
        }
    }

    #[test]
    fn from_roots_edge_cases() {
        assert_eq!(Polynomial::from_roots(&[c(-1.0, 0.0)], 1.0).unwrap().coeffs(), &[1.0, 1.0]);
        assert_eq!(Polynomial::from_roots(&[], 5.0).unwrap().coeffs(), &[5.0]);
        assert!(matches!(
            Polynomial::from_roots(&[c(1.0, 2.0)], 1.0),
            Err(Error::UnpairedComplexRoot(_))
        ));
    }

    #[test]
    fn roots_of_section4_polynomials() {
        let r = section4_den().roots().unwrap();
        let expected = [-0.5, -0.4, -0.3];
        for (z, e) in r.iter().zip(expected) {
            assert!((z - c(e, 0.0)).norm() < 1e-12, "{r:?}");
        }
        let q = Polynomial::new(vec![0.8, -19.24, -19.04, 1.0]);
        let r = q.roots().unwrap();
        for (z, e) in r.iter().zip([-1.0, 0.04, 20.0]) {
            assert!((z - c(e, 0.0)).norm() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn imaginary_pair_is_adjacent_and_conjugate() {
        let r = Polynomial::new(vec![1.0, 0.0, 1.0]).roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(r[1], r[0].conj());
    }

    #[test]
    fn constant_has_no_roots() {
        assert_eq!(Polynomial::constant(3.0).roots(), Err(Error::ConstantPolynomial));
        assert_eq!(Polynomial::zero().roots(), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn origin_roots_are_exact() {
        let r = Polynomial::new(vec![0.0, 0.0, 2.0, 1.0]).roots().unwrap();
        assert_eq!(&r[..2], &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((r[2] + 2.0).norm() < 1e-15);
    }

    #[test]
    fn ring_operations() {
        let p = Polynomial::new(vec![1.0, 1.0]);
        let q = Polynomial::new(vec![-1.0, 1.0]);
        assert_eq!((&p * &q).coeffs(), &[-1.0, 0.0, 1.0]);
        let two = Polynomial::constant(2.0);
        assert!((&two - &two).is_zero());
        assert_eq!(Polynomial::new(vec![1.0, 2.0]).scale(3.0).coeffs(), &[3.0, 6.0]);
    }

    #[test]
    fn subtraction_trims_cancelled_leading_terms() {
        // Both monic cubics: the difference is quadratic.
        let nf = Polynomial::new(vec![0.012, 0.26, 0.9, 1.0]);
        let nd = Polynomial::new(vec![0.8, -19.24, -19.04, 1.0]);
        assert_eq!((&nf - &nd).degree(), 2);
        // Near-cancellation below the relative threshold is trimmed too.
        let a = Polynomial::new(vec![1.0, 1.0 + 1e-14]);
        let b = Polynomial::new(vec![0.0, 1.0]);
        assert_eq!((&a - &b).degree(), 0);
    }

    #[test]
    fn wide_range_products_keep_their_degree() {
        let p = Polynomial::from_roots(&[c(-1000.0, 0.0); 4], 1.0).unwrap();
        assert_eq!((&p * &p).degree(), 8);
        assert_eq!(p.scale(1e-9).degree(), 4);
        assert_eq!(p.squared_magnitude_in_w2().degree(), 4);
    }

    #[test]
    fn cancellation_is_judged_per_coefficient() {
        let a = Polynomial::new(vec![1e14, 0.0, 3.0]);
        let b = Polynomial::new(vec![0.0, 0.0, 1.0]);
        assert_eq!(a.sub_cancelling(&b).coeffs(), &[1e14, 0.0, 2.0]);
        assert_eq!((&a - &b).degree(), 0);
        let d = Polynomial::new(vec![1.0, 1.0 + 1e-14]);
        let e = Polynomial::new(vec![0.0, 1.0]);
        assert_eq!(d.sub_cancelling(&e).degree(), 0);
        assert!(a.sub_cancelling(&a).is_zero());
    }

    #[test]
    fn div_rem_recovers_factor() {
        let p = Polynomial::new(vec![-1.0, 0.0, 1.0]);
        let (q, r) = p.div_rem(&Polynomial::new(vec![1.0, 1.0]));
        assert_eq!(q.coeffs(), &[-1.0, 1.0]);
        assert!(r.is_zero());
    }

    #[test]
    fn squared_magnitude_matches_direct_evaluation() {
        let p = Polynomial::new(vec![0.3, -1.2, 0.5, 2.0, -0.7]);
        let m = p.squared_magnitude_in_w2();
        for w in [0.0, 0.1, 1.0, 3.7, 25.0] {
            let direct = p.eval(c(0.0, w)).norm_sqr();
            assert!((m.eval_real(w * w) - direct).abs() <= 1e-12 * direct.max(1.0));
        }
    }

    fn separated_roots() -> impl Strategy<Value = Vec<Complex64>> {
        // Up to 4 real roots and 2 conjugate pairs inside |r| <= 10.
        (
            prop::collection::vec(-10.0f64..10.0, 0..=4),
            prop::collection::vec((-7.0f64..7.0, 0.05f64..7.0), 0..=2),
        )
            .prop_map(|(reals, pairs)| {
                let mut v: Vec<Complex64> = reals.into_iter().map(|x| c(x, 0.0)).collect();
                for (re, im) in pairs {
                    v.push(c(re, im));
                    v.push(c(re, -im));
                }
                v
            })
            .prop_filter("roots separated by at least 0.05", |v| {
                !v.is_empty()
                    && v.iter().enumerate().all(|(i, a)| {
                        v.iter().skip(i + 1).all(|b| (a - b).norm() >= 0.05)
                    })
            })
    }

    proptest! {
        #[test]
        fn roots_invert_from_roots(roots in separated_roots()) {
            let p = Polynomial::from_roots(&roots, 1.0).unwrap();
            let found = p.roots().unwrap();
            prop_assert_eq!(found.len(), roots.len());
            let mut used = vec![false; found.len()];
            for r in &roots {
                let (j, d) = found
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, z)| (j, (z - r).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                used[j] = true;
                prop_assert!(d <= 1e-7, "root {} recovered with error {}", r, d);
            }
        }

        #[test]
        fn roots_have_small_residual(coeffs in prop::collection::vec(-5.0f64..5.0, 2..=9)) {
            let p = Polynomial::new(coeffs);
            prop_assume!(p.degree() >= 1 && p.leading().abs() > 1e-3);
            let deg = p.degree() as i32;
            let sum: f64 = p.coeffs().iter().map(|c| c.abs()).sum();
            let roots = p.roots().unwrap();
            for r in &roots {
                let bound = 1e-9 * sum * r.norm().max(1.0).powi(deg);
                prop_assert!(p.eval(*r).norm() <= bound, "residual at {}", r);
            }
            // Closure under conjugation.
            for r in &roots {
                prop_assert!(roots.iter().any(|z| (z - r.conj()).norm() <= 1e-9 * r.norm().max(1.0)));
            }
        }

        #[test]
        fn eval_is_multiplicative(
            a in prop::collection::vec(-3.0f64..3.0, 1..6),
            b in prop::collection::vec(-3.0f64..3.0, 1..6),
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            let p = Polynomial::new(a);
            let q = Polynomial::new(b);
            let s = c(re, im);
            let lhs = (&p * &q).eval(s);
            let rhs = p.eval(s) * q.eval(s);
            let scale = p.eval_scale(s) * q.eval_scale(s);
            prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1e-300));
        }
    }
}
