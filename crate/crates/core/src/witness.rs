//! Time-domain witnesses for the gain metrics.
//!
//! A witness is a long, tapered sinusoid at the peak frequency of the
//! numerator ratio. Simulated through the state-space realizations of the
//! channels it keeps the residual within the detection threshold while
//! driving the performance output (or the fault energy) towards the
//! computed gain.

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::format_sig12;
use crate::gains::{iig_lower, oog};
use crate::transfer::TransferFunction;

/// Detection threshold on residual energy.
pub const DETECTION_THRESHOLD: f64 = 1.0;

/// Fraction of the horizon tapered at each end of a witness.
pub const TAPER_FRACTION: f64 = 0.1;

/// Minimum horizon, in periods of the excitation frequency.
pub const MIN_PERIODS: f64 = 50.0;

/// Default horizon, in periods of the excitation frequency.
pub const DEFAULT_PERIODS: f64 = 100.0;

/// Default samples per period.
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 512.0;

/// Relative allowance in the undetectability check.
pub const UNDETECTABILITY_RTOL: f64 = 1e-3;

/// Disturbance amplification used by the fault witness.
const XI: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceSystem {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl StateSpaceSystem {
    /// Controllable canonical form of a proper transfer function.
    pub fn realize(t: &TransferFunction) -> Result<Self> {
        if !t.is_proper() {
            return Err(Error::NonProper);
        }
        let den = t.den().coeffs();
        let lead = *den.last().unwrap();
        let n = den.len() - 1;
        let mut num = vec![0.0; n + 1];
        for (k, &v) in t.num().coeffs().iter().enumerate() {
            num[k] = v / lead;
        }
        let a_coef: Vec<f64> = den.iter().map(|v| v / lead).collect();
        let d = num[n];
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            a[(i, i + 1)] = 1.0;
        }
        if n > 0 {
            for j in 0..n {
                a[(n - 1, j)] = -a_coef[j];
            }
        }
        let mut b = DVector::zeros(n);
        if n > 0 {
            b[n - 1] = 1.0;
        }
        let c = RowDVector::from_iterator(n, (0..n).map(|k| num[k] - d * a_coef[k]));
        Ok(StateSpaceSystem { a, b, c, d })
    }

    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// `C (jwI - A)^-1 B + D`.
    pub fn freq_response(&self, omega: f64) -> Result<Complex64> {
        let n = self.order();
        if n == 0 {
            return Ok(Complex64::new(self.d, 0.0));
        }
        let jw = Complex64::new(0.0, omega);
        let m = DMatrix::from_fn(n, n, |i, j| {
            let v = Complex64::new(-self.a[(i, j)], 0.0);
            if i == j {
                v + jw
            } else {
                v
            }
        });
        let rhs = self.b.map(|v| Complex64::new(v, 0.0));
        let x = m.lu().solve(&rhs).ok_or(Error::ImaginaryAxisPole(omega))?;
        let y: Complex64 = self
            .c
            .iter()
            .zip(x.iter())
            .map(|(&c, &x)| x * c)
            .sum();
        Ok(y + self.d)
    }

    /// Classical RK4 from `x(0) = 0`, input linearly interpolated inside
    /// each step, output sampled on the input grid.
    pub fn simulate(&self, input: &Signal) -> Signal {
        let n = self.order();
        let u = &input.samples;
        let h = input.dt;
        let mut y = Vec::with_capacity(u.len());
        if n == 0 {
            y.extend(u.iter().map(|v| self.d * v));
            return Signal { dt: h, samples: y };
        }
        let a: Vec<f64> = (0..n * n).map(|k| self.a[(k / n, k % n)]).collect();
        let b: Vec<f64> = self.b.iter().copied().collect();
        let c: Vec<f64> = self.c.iter().copied().collect();
        let deriv = |x: &[f64], u: f64, out: &mut [f64]| {
            for i in 0..n {
                let row = &a[i * n..(i + 1) * n];
                out[i] = row.iter().zip(x).map(|(r, x)| r * x).sum::<f64>() + b[i] * u;
            }
        };
        let mut x = vec![0.0; n];
        let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        for k in 0..u.len() {
            y.push(c.iter().zip(&x).map(|(c, x)| c * x).sum::<f64>() + self.d * u[k]);
            if k + 1 == u.len() {
                break;
            }
            let (u0, u1) = (u[k], u[k + 1]);
            let um = 0.5 * (u0 + u1);
            deriv(&x, u0, &mut k1);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * h * k1[i];
            }
            deriv(&tmp, um, &mut k2);
            for i in 0..n {
                tmp[i] = x[i] + 0.5 * h * k2[i];
            }
            deriv(&tmp, um, &mut k3);
            for i in 0..n {
                tmp[i] = x[i] + h * k3[i];
            }
            deriv(&tmp, u1, &mut k4);
            for i in 0..n {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        Signal { dt: h, samples: y }
    }
}

/// Uniformly sampled signal starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl Signal {
    pub fn zeros(dt: f64, len: usize) -> Self {
        Signal { dt, samples: vec![0.0; len] }
    }

    /// `dt * (len - 1)`.
    pub fn horizon(&self) -> f64 {
        self.dt * self.samples.len().saturating_sub(1) as f64
    }

    /// Trapezoidal squared L2 norm.
    pub fn energy(&self) -> f64 {
        let s = &self.samples;
        if s.len() < 2 {
            return 0.0;
        }
        let inner: f64 = s.iter().map(|v| v * v).sum();
        self.dt * (inner - 0.5 * (s[0] * s[0] + s[s.len() - 1] * s[s.len() - 1]))
    }

    pub fn scaled(&self, k: f64) -> Signal {
        Signal {
            dt: self.dt,
            samples: self.samples.iter().map(|v| v * k).collect(),
        }
    }

    pub fn same_grid(&self, other: &Signal) -> bool {
        self.samples.len() == other.samples.len() && self.dt == other.dt
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(Signal {
            dt: self.dt,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    /// Two-column CSV `t,value` with twelve significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,value")?;
        for (k, v) in self.samples.iter().enumerate() {
            writeln!(w, "{},{}", format_sig12(k as f64 * self.dt), format_sig12(*v))?;
        }
        Ok(())
    }
}

/// Tukey window with [`TAPER_FRACTION`] cosine ramps at each end.
fn taper(t: f64, horizon: f64) -> f64 {
    let ramp = TAPER_FRACTION * horizon;
    if ramp <= 0.0 {
        return 1.0;
    }
    let edge = t.min(horizon - t);
    if edge >= ramp {
        1.0
    } else if edge <= 0.0 {
        0.0
    } else {
        0.5 * (1.0 - (PI * edge / ramp).cos())
    }
}

/// `taper(t) * sin(omega t + phase)`, or the bare taper at `omega = 0`.
fn tone(omega: f64, phase: f64, horizon: f64, dt: f64) -> Signal {
    let len = (horizon / dt).round() as usize + 1;
    let samples = (0..len)
        .map(|k| {
            let t = k as f64 * dt;
            let carrier = if omega == 0.0 { phase.cos() } else { (omega * t + phase).sin() };
            taper(t, horizon) * carrier
        })
        .collect();
    Signal { dt, samples }
}

fn max_pole_magnitude(ts: &[&TransferFunction]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for t in ts {
        for p in t.poles()? {
            m = m.max(p.norm());
        }
    }
    Ok(if m > 0.0 { m } else { 1.0 })
}

fn slowest_time_constant(ts: &[&TransferFunction]) -> Result<f64> {
    let mut tau: f64 = 0.0;
    for t in ts {
        for p in t.poles()? {
            if p.re < 0.0 {
                tau = tau.max(-1.0 / p.re);
            }
        }
    }
    Ok(tau)
}

/// Frequency actually used for the witness given the peak frequency:
/// the peak itself when finite, `100 *` the largest pole magnitude when the
/// supremum is at infinity.
pub fn excitation_frequency(peak_omega: f64, channels: &[&TransferFunction]) -> Result<f64> {
    if peak_omega.is_finite() {
        Ok(peak_omega)
    } else {
        Ok(100.0 * max_pole_magnitude(channels)?)
    }
}

/// Shortest admissible horizon for a witness at `omega`.
pub fn minimum_horizon(omega: f64, channels: &[&TransferFunction]) -> Result<f64> {
    if omega > 0.0 {
        Ok(MIN_PERIODS * 2.0 * PI / omega)
    } else {
        Ok(MIN_PERIODS * slowest_time_constant(channels)?)
    }
}

/// Horizon and step used when the caller does not choose them.
pub fn default_grid(omega: f64, channels: &[&TransferFunction]) -> Result<(f64, f64)> {
    if omega > 0.0 {
        let period = 2.0 * PI / omega;
        Ok((DEFAULT_PERIODS * period, period / DEFAULT_STEPS_PER_PERIOD))
    } else {
        let tau = slowest_time_constant(channels)?.max(1e-3);
        let horizon = 2.0 * MIN_PERIODS * tau;
        Ok((horizon, horizon / (DEFAULT_PERIODS * DEFAULT_STEPS_PER_PERIOD)))
    }
}

fn check_grid(horizon: f64, dt: f64, omega: f64, channels: &[&TransferFunction]) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    if !(horizon > dt) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!("horizon {horizon} is not longer than the step")));
    }
    let min = minimum_horizon(omega, channels)?;
    if horizon < min * (1.0 - 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is shorter than the required {min}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StealthyAttack {
    pub omega: f64,
    pub attack: Signal,
    pub y_r: Signal,
    pub y_p: Signal,
    pub yr_energy: f64,
    /// Achieved performance-output energy.
    pub yp_energy: f64,
    /// `||N_p/N_r||^2`.
    pub gamma: f64,
}

impl StealthyAttack {
    pub fn ratio_to_bound(&self) -> f64 {
        self.yp_energy / self.gamma
    }
}

/// Tapered sinusoid at the OOG peak, scaled to unit residual energy.
pub fn build_stealthy_attack(
    t_ayr: &TransferFunction,
    t_ayp: &TransferFunction,
    horizon: f64,
    dt: f64,
    axis_tol: f64,
) -> Result<StealthyAttack> {
    let report = oog(t_ayr, t_ayp, axis_tol)?;
    if let Some(reason) = report.infinite_reason {
        return Err(Error::InfiniteGain(reason));
    }
    let channels = [t_ayr, t_ayp];
    let omega = excitation_frequency(report.peak_omega, &channels)?;
    check_grid(horizon, dt, omega, &channels)?;

    let sys_r = StateSpaceSystem::realize(t_ayr)?;
    let sys_p = StateSpaceSystem::realize(t_ayp)?;
    let raw = tone(omega, 0.0, horizon, dt);
    let raw_energy = sys_r.simulate(&raw).energy();
    if !(raw_energy > 0.0) {
        return Err(Error::InvalidArgument("residual channel does not respond to the witness".into()));
    }
    // Energy is quadratic in the amplitude, so the scaling is exact.
    let attack = raw.scaled((DETECTION_THRESHOLD / raw_energy).sqrt());
    let y_r = sys_r.simulate(&attack);
    let y_p = sys_p.simulate(&attack);
    Ok(StealthyAttack {
        omega,
        yr_energy: y_r.energy(),
        yp_energy: y_p.energy(),
        gamma: report.oog,
        attack,
        y_r,
        y_p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UndetectableFault {
    pub omega: f64,
    pub fault: Signal,
    pub disturbance: Signal,
    /// `T_dr[d] + T_fr[f]`.
    pub residual: Signal,
    /// `T_dr[d]`.
    pub residual_disturbance_only: Signal,
    pub f_energy: f64,
    pub d_energy: f64,
    /// `||T_dr[d]||^2 - ||r||^2`.
    pub detectability_slack: f64,
    /// `4 ||N_d/N_f||^2`.
    pub iig_lower: f64,
    pub undetectable: bool,
}

impl UndetectableFault {
    pub fn ratio_to_bound(&self) -> f64 {
        self.f_energy / self.iig_lower
    }

    pub fn disturbance_residual_energy(&self) -> f64 {
        self.residual_disturbance_only.energy()
    }
}

/// Fault/disturbance pair hiding the fault behind a unit-energy disturbance.
///
/// `d` is a unit-energy tapered sinusoid at the IIG peak and the scaled
/// disturbance is `-2d`. The fault is the same tapered sinusoid carried
/// through the phasor `(T_dr/T_fr)(jw)` applied to `-2d`, so that
/// `T_fr[f] ≈ T_dr[-2d]` and the residual `T_dr[d] + T_fr[f] ≈ -T_dr[d]`.
pub fn build_undetectable_fault(
    t_fr: &TransferFunction,
    t_dr: &TransferFunction,
    horizon: f64,
    dt: f64,
    axis_tol: f64,
) -> Result<UndetectableFault> {
    fault_pair_with_scaling(t_fr, t_dr, horizon, dt, axis_tol, XI)
}

pub(crate) fn fault_pair_with_scaling(
    t_fr: &TransferFunction,
    t_dr: &TransferFunction,
    horizon: f64,
    dt: f64,
    axis_tol: f64,
    xi: f64,
) -> Result<UndetectableFault> {
    let report = iig_lower(t_fr, t_dr, axis_tol)?;
    if let Some(reason) = report.infinite_reason {
        return Err(Error::InfiniteGain(reason));
    }
    let channels = [t_fr, t_dr];
    let omega = excitation_frequency(report.peak_omega, &channels)?;
    check_grid(horizon, dt, omega, &channels)?;

    let base = tone(omega, 0.0, horizon, dt);
    let unit = 1.0 / base.energy().sqrt();
    let disturbance = base.scaled(unit);

    let gain = report.ratio.freq_response(omega)?;
    let fault = if omega == 0.0 {
        base.scaled(-xi * unit * gain.re)
    } else {
        tone(omega, gain.arg(), horizon, dt).scaled(-xi * unit * gain.norm())
    };

    let sys_f = StateSpaceSystem::realize(t_fr)?;
    let sys_d = StateSpaceSystem::realize(t_dr)?;
    let residual_disturbance_only = sys_d.simulate(&disturbance);
    let residual = residual_disturbance_only.add(&sys_f.simulate(&fault))?;
    let undetectable = verify_undetectability(&residual, &residual_disturbance_only)?;
    Ok(UndetectableFault {
        omega,
        f_energy: fault.energy(),
        d_energy: disturbance.energy(),
        detectability_slack: residual_disturbance_only.energy() - residual.energy(),
        iig_lower: report.iig_lower,
        undetectable,
        fault,
        disturbance,
        residual,
        residual_disturbance_only,
    })
}

/// The fault is undetectable when it does not raise the residual energy
/// above that of the disturbance alone, up to a relative `1e-3`.
pub fn verify_undetectability(r_with_fault: &Signal, r_disturbance_only: &Signal) -> Result<bool> {
    if !r_with_fault.same_grid(r_disturbance_only) {
        return Err(Error::GridMismatch);
    }
    Ok(r_with_fault.energy() <= r_disturbance_only.energy() * (1.0 + UNDETECTABILITY_RTOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::DEFAULT_AXIS_TOL as TOL;
    use crate::Polynomial;

    fn tf(zeros: &[f64], poles: &[f64], gain: f64) -> TransferFunction {
        let z: Vec<_> = zeros.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let p: Vec<_> = poles.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        TransferFunction::from_roots(&z, &p, gain).unwrap()
    }

    fn t_fr() -> TransferFunction {
        tf(&[-0.1, -0.2, -0.6], &[-0.3, -0.4, -0.5], 1.0)
    }

    fn t_dr() -> TransferFunction {
        tf(&[-1.0, 0.04, 20.0], &[-0.3, -0.4, -0.5], 1.0)
    }

    #[test]
    fn first_order_realization() {
        let s = StateSpaceSystem::realize(&tf(&[], &[-1.0], 1.0)).unwrap();
        assert_eq!(s.a, DMatrix::from_element(1, 1, -1.0));
        assert_eq!(s.b, DVector::from_element(1, 1.0));
        assert_eq!(s.c, RowDVector::from_element(1, 1.0));
        assert_eq!(s.d, 0.0);
    }

    #[test]
    fn static_gain_realization() {
        let s = StateSpaceSystem::realize(&TransferFunction::constant(1.0)).unwrap();
        assert_eq!(s.order(), 0);
        assert_eq!(s.d, 1.0);
        let u = Signal { dt: 0.1, samples: vec![1.0, -2.0, 3.0] };
        assert_eq!(s.simulate(&u), u);
    }

    #[test]
    fn realization_rejects_non_proper() {
        let t = TransferFunction::new(Polynomial::new(vec![0.0, 0.0, 1.0]), Polynomial::new(vec![1.0, 1.0])).unwrap();
        assert_eq!(StateSpaceSystem::realize(&t), Err(Error::NonProper));
    }

    #[test]
    fn section4_realization_matches_transfer_function() {
        let t = t_fr();
        let s = StateSpaceSystem::realize(&t).unwrap();
        assert_eq!(s.order(), 3);
        let mut ev: Vec<f64> = s.a.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (e, p) in ev.iter().zip([-0.5, -0.4, -0.3]) {
            assert!((e - p).abs() < 1e-7);
        }
        for w in [0.0, 0.1, 0.7, 3.0, 40.0] {
            let a = s.freq_response(w).unwrap();
            let b = t.freq_response(w).unwrap();
            assert!((a - b).norm() <= 1e-8 * b.norm());
        }
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let s = StateSpaceSystem::realize(&t_fr()).unwrap();
        let y = s.simulate(&Signal::zeros(0.1, 100));
        assert!(y.samples.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn step_response_settles_at_dc_gain() {
        let s = StateSpaceSystem::realize(&tf(&[], &[-1.0], 1.0)).unwrap();
        let u = Signal { dt: 0.01, samples: vec![1.0; 1001] };
        let y = s.simulate(&u);
        assert!((y.samples.last().unwrap() - 1.0).abs() < 1e-4 + (-10.0f64).exp());
        assert!((y.samples.last().unwrap() - (1.0 - (-10.0f64).exp())).abs() < 1e-6);
    }

    #[test]
    fn sinusoid_steady_state_amplitude() {
        let t = t_fr();
        let s = StateSpaceSystem::realize(&t).unwrap();
        let w = 0.5;
        let dt = 2.0 * PI / w / 64.0;
        let len = 64 * 60;
        let u = Signal { dt, samples: (0..len).map(|k| (w * k as f64 * dt).sin()).collect() };
        let y = s.simulate(&u);
        let tail = &y.samples[len - 64 * 5..];
        let amp = tail.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let expected = t.freq_response(w).unwrap().norm();
        assert!((amp - expected).abs() <= 0.01 * expected);
    }

    #[test]
    fn energy_is_trapezoidal() {
        let s = Signal { dt: 0.5, samples: vec![1.0, 2.0, 2.0] };
        assert_eq!(s.energy(), 0.5 * (0.5 + 4.0 + 2.0));
        assert_eq!(s.horizon(), 1.0);
    }

    #[test]
    fn undetectability_examples() {
        let r = Signal { dt: 0.1, samples: vec![0.0, 1.0, -1.0, 0.5] };
        assert!(verify_undetectability(&r, &r).unwrap());
        assert!(!verify_undetectability(&r.scaled(2.0), &r).unwrap());
        let other = Signal { dt: 0.2, samples: r.samples.clone() };
        assert_eq!(verify_undetectability(&r, &other), Err(Error::GridMismatch));
    }

    #[test]
    fn identical_channels_attack_has_unit_ratio() {
        let t = tf(&[-1.0], &[-0.5, -2.0], 1.0);
        let report = oog(&t, &t, TOL).unwrap();
        let (h, dt) = default_grid(excitation_frequency(report.peak_omega, &[&t]).unwrap(), &[&t]).unwrap();
        let w = build_stealthy_attack(&t, &t, h, dt, TOL).unwrap();
        assert!((w.yr_energy - 1.0).abs() < 1e-6);
        assert!((w.yp_energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_channels_fault_matches_scaled_disturbance() {
        let t = t_fr();
        let report = iig_lower(&t, &t, TOL).unwrap();
        let omega = excitation_frequency(report.peak_omega, &[&t]).unwrap();
        let (h, dt) = default_grid(omega, &[&t]).unwrap();
        let w = build_undetectable_fault(&t, &t, h, dt, TOL).unwrap();
        assert!((w.d_energy - 1.0).abs() < 1e-9);
        assert!((w.f_energy - 4.0).abs() < 1e-6);
        for (f, d) in w.fault.samples.iter().zip(&w.disturbance.samples) {
            assert!((f + 2.0 * d).abs() < 1e-9);
        }
    }

    #[test]
    fn infinite_gain_has_no_witness() {
        let ayr = tf(&[1.0], &[-2.0, -2.0], 1.0);
        let ayp = tf(&[], &[-2.0], 1.0);
        assert!(matches!(
            build_stealthy_attack(&ayr, &ayp, 100.0, 0.1, TOL),
            Err(Error::InfiniteGain(crate::InfiniteReason::UnsharedNmpZeroInDivisor))
        ));
    }

    #[test]
    fn grid_is_validated() {
        let t = t_fr();
        assert!(matches!(build_undetectable_fault(&t, &t_dr(), 5000.0, 0.0, TOL), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_undetectable_fault(&t, &t_dr(), 10.0, 0.1, TOL), Err(Error::InvalidArgument(_))));
    }

    fn steady_energy(s: &Signal) -> f64 {
        let n = s.samples.len();
        let lo = (n as f64 * (TAPER_FRACTION + 0.05)) as usize;
        let hi = n - lo;
        Signal { dt: s.dt, samples: s.samples[lo..hi].to_vec() }.energy()
    }

    #[test]
    fn disturbance_scaling_identity() {
        let (fr, dr) = (t_fr(), t_dr());
        let report = iig_lower(&fr, &dr, TOL).unwrap();
        let omega = report.peak_omega;
        let (h, dt) = default_grid(omega, &[&fr, &dr]).unwrap();
        for xi in [0.0, 1.0, 2.0] {
            let w = fault_pair_with_scaling(&fr, &dr, h, dt, TOL, xi).unwrap();
            let d_tilde = w.disturbance.scaled(-xi);
            assert!((d_tilde.energy() - xi * xi * w.d_energy).abs() <= 1e-12 * xi * xi);
            let rd = steady_energy(&w.residual_disturbance_only).sqrt();
            let r = steady_energy(&w.residual).sqrt();
            // The additive term is the O(dt^2) floor of the input interpolation.
            assert!(r <= ((1.0 - xi).abs() * (1.0 + 1e-2) + 1e-3) * rd, "xi {xi}: {r} vs {rd}");
            if xi == 0.0 {
                assert!(w.fault.samples.iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn csv_has_header_and_twelve_digits() {
        let s = Signal { dt: 0.5, samples: vec![1.0, 1.0 / 3.0] };
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines[2], "5.00000000000e-1,3.33333333333e-1");
    }
}
