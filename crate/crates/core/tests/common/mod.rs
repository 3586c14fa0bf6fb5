//! Random rational functions in factored form, with an evaluator that never
//! touches the expanded coefficients.

#![allow(dead_code)]

use rand::Rng;
use stealth_gain::{Complex64, TransferFunction};

#[derive(Debug, Clone)]
pub struct Factored {
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub gain: f64,
}

impl Factored {
    pub fn tf(&self) -> TransferFunction {
        TransferFunction::from_roots(&self.zeros, &self.poles, self.gain).expect("valid factored form")
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|z| s - z).product();
        let den: Complex64 = self.poles.iter().map(|p| s - p).product();
        num / den * self.gain
    }

    pub fn eval_jw(&self, omega: f64) -> f64 {
        self.eval(Complex64::new(0.0, omega)).norm()
    }

    /// `|G(j inf)|`.
    pub fn high_frequency_gain(&self) -> f64 {
        match self.zeros.len().cmp(&self.poles.len()) {
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Equal => self.gain.abs(),
            std::cmp::Ordering::Greater => f64::INFINITY,
        }
    }

    pub fn root_scale(&self) -> f64 {
        self.zeros
            .iter()
            .chain(&self.poles)
            .map(|r| r.norm())
            .fold(1e-3, f64::max)
    }
}

/// Which half-plane a root set lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Half {
    Left,
    Right,
    Either,
}

/// `count` roots closed under conjugation with `|Re| in [re_min, re_max]`.
/// Complex pairs keep a damping ratio of at least 0.1.
pub fn random_roots<R: Rng>(rng: &mut R, count: usize, half: Half, re_min: f64, re_max: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sign = match half {
            Half::Left => -1.0,
            Half::Right => 1.0,
            Half::Either => {
                if rng.gen_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        let re = sign * rng.gen_range(re_min..re_max);
        if count - out.len() >= 2 && rng.gen_bool(0.4) {
            let im = rng.gen_range(0.1..(9.9 * re.abs()).clamp(0.2, 5.0));
            out.push(Complex64::new(re, im));
            out.push(Complex64::new(re, -im));
        } else {
            out.push(Complex64::new(re, 0.0));
        }
    }
    out
}

/// Stable, proper system of order `1..=max_order` with zeros in `zero_half`.
pub fn random_stable<R: Rng>(rng: &mut R, max_order: usize, zero_half: Half) -> Factored {
    let n = rng.gen_range(1..=max_order);
    let m = rng.gen_range(0..=n);
    let poles = random_roots(rng, n, Half::Left, 0.1, 5.0);
    let zeros = random_roots(rng, m, zero_half, 0.05, 5.0);
    let gain = rng.gen_range(0.2..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Factored { zeros, poles, gain }
}
