//! Parameter sweep over the TAU token.

use std::thread;

use stealth_gain::{nmp_limit_bound, verify_limit_bound, Error, TransferFunction};

use super::gain_report;
use crate::config::SystemConfig;
use crate::error::{CliError, CliResult};
use crate::report::{default_out_dir, Cell, Table};
use crate::{check_axis_tol, SweepArgs};

pub const ZEROS_FILE: &str = "nmp_zero_vs_tau.csv";
pub const BOUND_FILE: &str = "bound_vs_tau.csv";

/// Row status for a quantity that could not be evaluated at this point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Degenerate,
    Infinite,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Degenerate => "degenerate",
            Status::Infinite => "infinite",
        }
    }
}

struct Point {
    tau: f64,
    zeros_status: Status,
    /// Real right-half-plane zeros of `1 - S`, ascending.
    zeros: Vec<f64>,
    bound_status: Status,
    bound: Option<f64>,
    hinf: Option<f64>,
    note: Option<String>,
}

pub fn grid(min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || min >= max {
        return Err(CliError::invalid(format!("empty or non-finite range [{min}, {max}]")));
    }
    if steps < 2 {
        return Err(CliError::invalid(format!("--steps must be at least 2, got {steps}")));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps).map(|k| min + (max - min) * k as f64 / n).collect())
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let tol = check_axis_tol(args.system.axis_tol)?;
    if args.param != "tau" {
        return Err(CliError::invalid(format!("unknown sweep parameter {:?}; only tau exists", args.param)));
    }
    let cfg = SystemConfig::load(&args.system.config)?;
    if !cfg.uses_tau() {
        return Err(CliError::invalid("no root list uses the TAU token"));
    }
    let taus = grid(args.min, args.max, args.steps)?;
    let points = evaluate_all(&cfg, &taus, tol)?;

    let dir = args.out.clone().unwrap_or_else(default_out_dir);
    write_zeros(&dir.join(ZEROS_FILE), &points)?;
    write_bounds(&dir.join(BOUND_FILE), &points)?;

    let skipped: Vec<&Point> = points.iter().filter(|p| p.bound_status == Status::Degenerate).collect();
    for p in &skipped {
        eprintln!("tau = {}: {}", p.tau, p.note.as_deref().unwrap_or("degenerate"));
    }
    println!(
        "{} points over tau in [{}, {}], {} degenerate; wrote {} and {} to {}",
        points.len(),
        args.min,
        args.max,
        skipped.len(),
        ZEROS_FILE,
        BOUND_FILE,
        dir.display()
    );
    Ok(())
}

/// Evaluates every grid point, split across threads, in grid order.
fn evaluate_all(cfg: &SystemConfig, taus: &[f64], tol: f64) -> CliResult<Vec<Point>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(taus.len());
    let chunk = taus.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = taus
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&t| evaluate(cfg, t, tol)).collect::<CliResult<Vec<_>>>()))
            .collect();
        let mut out = Vec::with_capacity(taus.len());
        for h in handles {
            out.extend(h.join().expect("sweep worker panicked")?);
        }
        Ok(out)
    })
}

fn evaluate(cfg: &SystemConfig, tau: f64, tol: f64) -> CliResult<Point> {
    let mut point = Point {
        tau,
        zeros_status: Status::Degenerate,
        zeros: Vec::new(),
        bound_status: Status::Degenerate,
        bound: None,
        hinf: None,
        note: None,
    };
    let sys = cfg.build(Some(tau))?;
    let gain = match gain_report(cfg.orientation, &sys, tol) {
        Ok(g) => g,
        Err(CliError::Degenerate(m)) => {
            point.note = Some(m);
            return Ok(point);
        }
        Err(e) => return Err(e),
    };
    let s = &gain.ratio;

    match real_nmp_zeros_of_complement(s, tol) {
        Ok(z) => {
            point.zeros_status = Status::Ok;
            point.zeros = z;
        }
        Err(e) if e.is_degenerate() => point.note = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }

    let outcome = if gain.is_finite() {
        verify_limit_bound(s, tol).map(|c| (c.bound.bound, Some(c.hinf.value)))
    } else {
        nmp_limit_bound(s, tol).map(|b| (b.bound, None))
    };
    match outcome {
        Ok((b, h)) => {
            point.bound_status = if gain.is_finite() { Status::Ok } else { Status::Infinite };
            point.bound = Some(b);
            point.hinf = Some(h.unwrap_or(f64::INFINITY));
        }
        Err(e) if e.is_degenerate() => point.note = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    Ok(point)
}

fn real_nmp_zeros_of_complement(s: &TransferFunction, tol: f64) -> Result<Vec<f64>, Error> {
    let p = s.one_minus()?;
    if p.is_zero() {
        return Ok(Vec::new());
    }
    let cls = p.classify_zeros(tol)?;
    cls.require_no_boundary()?;
    let mut out: Vec<f64> = cls
        .nmp
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * z.re.abs().max(1.0))
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn write_zeros(path: &std::path::Path, points: &[Point]) -> CliResult<()> {
    let width = points.iter().map(|p| p.zeros.len()).max().unwrap_or(0).max(1);
    let mut header = vec!["tau".to_string(), "status".to_string()];
    header.extend((1..=width).map(|k| format!("zero_{k}")));
    let mut t = Table::create(path, &header)?;
    for p in points {
        let mut row = vec![Cell::Num(p.tau), Cell::Text(p.zeros_status.label().into())];
        row.extend((0..width).map(|k| p.zeros.get(k).map_or(Cell::Empty, |&z| Cell::Num(z))));
        t.row(&row)?;
    }
    t.finish()
}

fn write_bounds(path: &std::path::Path, points: &[Point]) -> CliResult<()> {
    let header = ["tau", "status", "bound", "hinf"].map(String::from);
    let mut t = Table::create(path, &header)?;
    for p in points {
        let opt = |v: Option<f64>| v.map_or(Cell::Empty, Cell::Num);
        t.row(&[Cell::Num(p.tau), Cell::Text(p.bound_status.label().into()), opt(p.bound), opt(p.hinf)])?;
    }
    t.finish()
}
