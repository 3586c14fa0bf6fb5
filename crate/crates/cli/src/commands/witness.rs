use std::collections::BTreeMap;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;
use stealth_gain::witness::{build_stealthy_attack, build_undetectable_fault, default_grid, Signal};
use stealth_gain::{InfiniteReason, Orientation};

use super::gain_report;
use crate::config::SystemConfig;
use crate::error::{CliError, CliResult};
use crate::report::{create_file, default_out_dir};
use crate::{check_axis_tol, WitnessArgs};

pub const SUMMARY_FILE: &str = "summary.json";

/// Attack ratios up to this far above 1 are attributed to discretization.
const OVERSHOOT_TOL: f64 = 0.02;
/// Lowest achieved/bound ratio accepted as convergence toward the gain.
const NEAR_BOUND: f64 = 0.9;

#[derive(Debug, Serialize)]
pub struct Summary {
    pub status: &'static str,
    pub orientation: Orientation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_reason: Option<InfiniteReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// The gain the witness approaches: OOG or the IIG lower bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    /// Performance-output energy or fault energy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub achieved: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub feasibility: BTreeMap<&'static str, bool>,
    pub files: Vec<String>,
}

fn write_signal(dir: &Path, name: &str, s: &Signal, files: &mut Vec<String>) -> CliResult<()> {
    let f = create_file(&dir.join(name))?;
    s.write_csv(BufWriter::new(f))?;
    files.push(name.to_string());
    Ok(())
}

pub fn run(args: &WitnessArgs) -> CliResult<()> {
    let tol = check_axis_tol(args.system.axis_tol)?;
    for (flag, v) in [("--dt", args.dt), ("--horizon", args.horizon)] {
        if let Some(v) = v {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CliError::invalid(format!("{flag} must be positive and finite, got {v}")));
            }
        }
    }
    let cfg = SystemConfig::load(&args.system.config)?;
    let sys = cfg.build(args.tau)?;
    let gain = gain_report(cfg.orientation, &sys, tol)?;
    let dir = args.out.clone().unwrap_or_else(default_out_dir);

    let mut summary = Summary {
        status: "infinite",
        orientation: cfg.orientation,
        infinite_reason: gain.infinite_reason,
        omega: None,
        horizon: None,
        dt: None,
        bound: None,
        achieved: None,
        ratio: None,
        feasibility: BTreeMap::new(),
        files: Vec::new(),
    };

    if gain.is_finite() {
        let channels = [&sys.first, &sys.second];
        let omega = stealth_gain::witness::excitation_frequency(gain.peak_omega, &channels)?;
        let (h0, dt0) = default_grid(gain.peak_omega, &channels)?;
        let (horizon, dt) = (args.horizon.unwrap_or(h0), args.dt.unwrap_or(dt0));
        summary.status = "ok";
        summary.omega = Some(omega);
        summary.horizon = Some(horizon);
        summary.dt = Some(dt);
        let files = &mut summary.files;
        match cfg.orientation {
            Orientation::Oog => {
                let w = build_stealthy_attack(&sys.first, &sys.second, horizon, dt, tol)?;
                write_signal(&dir, "attack.csv", &w.attack, files)?;
                write_signal(&dir, "y_r.csv", &w.y_r, files)?;
                write_signal(&dir, "y_p.csv", &w.y_p, files)?;
                let r = w.ratio_to_bound();
                summary.bound = Some(w.gamma);
                summary.achieved = Some(w.yp_energy);
                summary.ratio = Some(r);
                summary.feasibility.insert("unit_residual_energy", (w.yr_energy - 1.0).abs() <= 1e-6);
                summary.feasibility.insert("within_bound", r <= 1.0 + OVERSHOOT_TOL);
                summary.feasibility.insert("near_bound", r >= NEAR_BOUND);
            }
            Orientation::Iig => {
                let w = build_undetectable_fault(&sys.first, &sys.second, horizon, dt, tol)?;
                write_signal(&dir, "fault.csv", &w.fault, files)?;
                write_signal(&dir, "disturbance.csv", &w.disturbance, files)?;
                write_signal(&dir, "residual.csv", &w.residual, files)?;
                write_signal(&dir, "residual_disturbance_only.csv", &w.residual_disturbance_only, files)?;
                let r = w.ratio_to_bound();
                summary.bound = Some(w.iig_lower);
                summary.achieved = Some(w.f_energy);
                summary.ratio = Some(r);
                summary.feasibility.insert("unit_disturbance_energy", (w.d_energy - 1.0).abs() <= 1e-6);
                summary.feasibility.insert("undetectable", w.undetectable);
                summary.feasibility.insert("near_bound", r >= NEAR_BOUND);
            }
        }
    }

    let mut f = create_file(&dir.join(SUMMARY_FILE))?;
    serde_json::to_writer_pretty(&mut f, &summary)?;
    std::io::Write::write_all(&mut f, b"\n")?;

    match summary.ratio {
        Some(r) => println!(
            "witness at omega = {}: achieved/bound = {r:.6}; wrote {} files to {}",
            summary.omega.unwrap_or_default(),
            summary.files.len() + 1,
            dir.display()
        ),
        None => println!(
            "gain is infinite ({}); no finite witness, wrote {} to {}",
            gain.infinite_reason.map(|r| r.to_string()).unwrap_or_default(),
            SUMMARY_FILE,
            dir.display()
        ),
    }
    let failed: Vec<&str> = summary.feasibility.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
    if !failed.is_empty() {
        return Err(CliError::Failed(format!("witness feasibility: {}", failed.join(", "))));
    }
    Ok(())
}
