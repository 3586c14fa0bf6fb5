use stealth_gain::{Complex64, TransferFunction};

use super::gain_report;
use crate::config::SystemConfig;
use crate::error::{CliError, CliResult};
use crate::report::{default_out_dir, Cell, Table};
use crate::{check_axis_tol, BodeArgs};

pub const HEADER: [&str; 7] = ["omega", "ratio_abs", "ratio_db", "second_abs", "second_db", "first_abs", "first_db"];

pub fn log_grid(wmin: f64, wmax: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(wmin > 0.0) || !wmax.is_finite() || wmin >= wmax {
        return Err(CliError::invalid(format!("frequency range [{wmin}, {wmax}] is empty or not positive")));
    }
    if points < 2 {
        return Err(CliError::invalid(format!("--points must be at least 2, got {points}")));
    }
    let (a, b) = (wmin.log10(), wmax.log10());
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|k| match k {
            0 => wmin,
            k if k == points - 1 => wmax,
            k => 10f64.powf(a + (b - a) * k as f64 / n),
        })
        .collect())
}

fn magnitude(t: &TransferFunction, w: f64) -> f64 {
    t.eval(Complex64::new(0.0, w)).norm()
}

pub fn run(args: &BodeArgs) -> CliResult<()> {
    let tol = check_axis_tol(args.system.axis_tol)?;
    let grid = log_grid(args.wmin, args.wmax, args.points)?;
    let cfg = SystemConfig::load(&args.system.config)?;
    let sys = cfg.build(args.tau)?;
    let ratio = gain_report(cfg.orientation, &sys, tol)?.ratio;

    let path = args.out.clone().unwrap_or_else(|| default_out_dir().join("bode.csv"));
    let mut t = Table::create(&path, &HEADER.map(String::from))?;
    for &w in &grid {
        let mut row = vec![Cell::Num(w)];
        for g in [&ratio, &sys.second, &sys.first] {
            let m = magnitude(g, w);
            row.push(Cell::Num(m));
            row.push(Cell::Num(20.0 * m.log10()));
        }
        t.row(&row)?;
    }
    t.finish()?;
    println!(
        "{} points over omega in [{}, {}] ({}, {}); wrote {}",
        grid.len(),
        args.wmin,
        args.wmax,
        cfg.label(crate::config::Which::Second),
        cfg.label(crate::config::Which::First),
        path.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_log_spaced_with_exact_ends() {
        let g = log_grid(1e-2, 1e2, 5).unwrap();
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[4], 1e2);
        assert!((g[2] - 1.0).abs() < 1e-12);
        for w in g.windows(2) {
            assert!((w[1] / w[0] - 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_ranges_are_rejected() {
        assert!(log_grid(1.0, 1.0, 10).is_err());
        assert!(log_grid(0.0, 1.0, 10).is_err());
        assert!(log_grid(-1.0, 1.0, 10).is_err());
        assert!(log_grid(1.0, 10.0, 1).is_err());
    }
}
