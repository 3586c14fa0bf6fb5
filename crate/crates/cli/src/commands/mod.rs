pub mod analyze;
pub mod bode;
pub mod poisson;
pub mod sweep;
pub mod witness;

use stealth_gain::{iig_lower, oog, GainReport, Orientation};

use crate::config::System;
use crate::error::CliResult;

/// Gain report for the pair in the configured orientation.
pub fn gain_report(orientation: Orientation, sys: &System, tol: f64) -> CliResult<GainReport> {
    Ok(match orientation {
        Orientation::Oog => oog(&sys.first, &sys.second, tol)?,
        Orientation::Iig => iig_lower(&sys.first, &sys.second, tol)?,
    })
}
