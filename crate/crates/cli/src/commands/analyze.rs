use std::time::Instant;

use stealth_gain::Orientation;

use super::gain_report;
use crate::config::SystemConfig;
use crate::error::{CliError, CliResult};
use crate::report::{default_out_dir, show, AnalysisReport, Classification, LimitSection};
use crate::{check_axis_tol, AnalyzeArgs};

pub fn run(args: &AnalyzeArgs) -> CliResult<()> {
    let start = Instant::now();
    let tol = check_axis_tol(args.system.axis_tol)?;
    let cfg = SystemConfig::load(&args.system.config)?;
    let sys = cfg.build(args.tau)?;
    let gain = gain_report(cfg.orientation, &sys, tol)?;
    let classification = Classification::new(&sys, &gain.ratio, tol)?;
    let limit = LimitSection::compute(&gain, tol);

    let report = AnalysisReport {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        tau: if cfg.uses_tau() { args.tau.or(cfg.tau) } else { None },
        input: cfg,
        axis_tol: tol,
        gain,
        limit,
        classification,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };

    let path = args.out.clone().unwrap_or_else(|| {
        default_out_dir().join(if args.csv { "analysis.csv" } else { "analysis.json" })
    });
    if args.csv {
        report.write_csv(&path)?;
    } else {
        report.write_json(&path)?;
    }

    print_summary(&report);
    println!("report: {}", path.display());

    if report.limit.degenerate {
        return Err(CliError::Degenerate(report.limit.error.clone().unwrap_or_default()));
    }
    Ok(())
}

fn print_summary(r: &AnalysisReport) {
    let g = &r.gain;
    let tau = r.tau.map(|t| format!(", tau = {t}")).unwrap_or_default();
    println!("{} ({}{tau})", r.input.name, format!("{:?}", g.orientation).to_lowercase());
    match g.infinite_reason {
        Some(reason) => println!("  ratio gain: inf ({reason})"),
        None => println!("  ||ratio||_inf = {} at omega = {}", show(g.hinf_ratio), show(g.peak_omega)),
    }
    match g.orientation {
        Orientation::Oog => println!("  OOG = {}", show(g.oog)),
        Orientation::Iig => println!("  IIG lower bound = {}", show(g.iig_lower)),
    }
    match g.classical {
        Some(c) => println!(
            "  classical bracket: {} <= ||ratio||_inf^2 <= {}",
            show(c.lo),
            show(c.hi)
        ),
        None => println!("  classical bracket: unavailable (a channel is unstable)"),
    }
    match (&r.limit.bound, &r.limit.error) {
        (Some(b), _) => {
            let norm = r.limit.hinf.map(|p| format!(", ||S||_inf = {}", show(p.value))).unwrap_or_default();
            println!("  limitation bound: ||S||_inf >= {}{norm}", show(b.bound));
        }
        (None, Some(e)) => println!("  limitation bound: unavailable ({e})"),
        (None, None) => {}
    }
}
