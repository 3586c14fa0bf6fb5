//! Adaptive Simpson quadrature on a finite interval.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: u32 = 60;
const MAX_EVALUATIONS: usize = 20_000_000;

struct State<F> {
    f: F,
    evaluations: usize,
}

impl<F: Fn(f64) -> f64> State<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evaluations += 1;
        if self.evaluations > MAX_EVALUATIONS {
            return Err(Error::Divergent);
        }
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Divergent)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
            return Ok(left + right + delta / 15.0);
        }
        Ok(self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
}

/// Integrates `f` over `[a, b]`. The absolute target is
/// `rel_tol * max(1, |coarse estimate|)`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let mut st = State { f, evaluations: 0 };
    let fa = st.eval(a)?;
    let fb = st.eval(b)?;
    let m = 0.5 * (a + b);
    let fm = st.eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = rel_tol * whole.abs().max(1.0);
    let v = st.refine(a, b, fa, fm, fb, whole, tol, max_depth)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Divergent)
    }
}
