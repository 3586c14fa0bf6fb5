//! Serialized analysis results and the CSV conventions shared by commands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stealth_gain::extended::{self, format_sig12};
use stealth_gain::{
    nmp_limit_bound, verify_limit_bound, GainReport, LimitBound, Peak, TransferFunction, ZeroClassification,
};

use crate::config::{System, SystemConfig};
use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "STEALTH_GAIN_OUT";

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

/// Creates the parent directory of `path` when missing.
pub fn ensure_parent(path: &Path) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::invalid(format!("cannot create {}: {e}", parent.display())))?;
    }
    Ok(())
}

pub fn create_file(path: &Path) -> CliResult<fs::File> {
    ensure_parent(path)?;
    fs::File::create(path).map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))
}

/// CSV writer over a file, with every number in twelve significant digits.
pub struct Table {
    inner: csv::Writer<fs::File>,
}

impl Table {
    pub fn create(path: &Path, header: &[String]) -> CliResult<Self> {
        let mut inner = csv::Writer::from_writer(create_file(path)?);
        inner.write_record(header)?;
        Ok(Table { inner })
    }

    pub fn row(&mut self, cells: &[Cell]) -> CliResult<()> {
        self.inner.write_record(cells.iter().map(Cell::render))?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner.flush()?;
        Ok(())
    }
}

pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_sig12(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// Root sets of both channels and of the numerator ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub first_zeros: ZeroClassification,
    pub first_poles: ZeroClassification,
    pub second_zeros: ZeroClassification,
    pub second_poles: ZeroClassification,
    pub ratio_zeros: ZeroClassification,
    pub ratio_poles: ZeroClassification,
}

fn zeros_of(t: &TransferFunction, tol: f64) -> CliResult<ZeroClassification> {
    if t.is_zero() {
        return Ok(ZeroClassification::default());
    }
    Ok(t.classify_zeros(tol)?)
}

impl Classification {
    pub fn new(sys: &System, ratio: &TransferFunction, tol: f64) -> CliResult<Self> {
        Ok(Classification {
            first_zeros: zeros_of(&sys.first, tol)?,
            first_poles: sys.first.classify_poles(tol)?,
            second_zeros: zeros_of(&sys.second, tol)?,
            second_poles: sys.second.classify_poles(tol)?,
            ratio_zeros: zeros_of(ratio, tol)?,
            ratio_poles: ratio.classify_poles(tol)?,
        })
    }
}

/// Limitation bound on the numerator ratio, with its check against the
/// computed norm when the ratio is stable and proper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSection {
    pub bound: Option<LimitBound>,
    /// `||S||_inf`, present when finite.
    pub hinf: Option<Peak>,
    pub holds: Option<bool>,
    pub poisson_agrees: Option<bool>,
    pub error: Option<String>,
    pub degenerate: bool,
}

impl LimitSection {
    pub fn compute(gain: &GainReport, tol: f64) -> Self {
        let empty = LimitSection {
            bound: None,
            hinf: None,
            holds: None,
            poisson_agrees: None,
            error: None,
            degenerate: false,
        };
        let fail = |e: stealth_gain::Error| LimitSection {
            error: Some(e.to_string()),
            degenerate: e.is_degenerate(),
            ..empty.clone()
        };
        if gain.is_finite() {
            match verify_limit_bound(&gain.ratio, tol) {
                Ok(c) => LimitSection {
                    bound: Some(c.bound),
                    hinf: Some(c.hinf),
                    holds: Some(c.holds),
                    poisson_agrees: Some(c.poisson_agrees),
                    ..empty
                },
                Err(e) => fail(e),
            }
        } else {
            match nmp_limit_bound(&gain.ratio, tol) {
                Ok(b) => LimitSection { bound: Some(b), ..empty },
                Err(e) => fail(e),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub input: SystemConfig,
    /// Value substituted for the TAU token, if any.
    #[serde(with = "extended::option")]
    pub tau: Option<f64>,
    pub axis_tol: f64,
    pub gain: GainReport,
    pub limit: LimitSection,
    pub classification: Classification,
    pub elapsed_seconds: f64,
}

impl AnalysisReport {
    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// `quantity,value` rows for the scalar results.
    pub fn rows(&self) -> Vec<(&'static str, Cell)> {
        let g = &self.gain;
        let num = Cell::Num;
        let opt = |v: Option<f64>| v.map_or(Cell::Empty, Cell::Num);
        let flag = |v: Option<bool>| v.map_or(Cell::Empty, |b| Cell::Text(b.to_string()));
        let bound = self.limit.bound.as_ref();
        vec![
            ("orientation", Cell::Text(format!("{:?}", g.orientation).to_lowercase())),
            ("tau", opt(self.tau)),
            ("hinf_ratio", num(g.hinf_ratio)),
            ("peak_omega", num(g.peak_omega)),
            ("oog", num(g.oog)),
            ("iig_lower", num(g.iig_lower)),
            ("infinite_reason", g.infinite_reason.map_or(Cell::Empty, |r| Cell::Text(r.to_string()))),
            ("classical_lo", opt(g.classical.map(|c| c.lo))),
            ("classical_hi", opt(g.classical.map(|c| c.hi))),
            ("limit_bound", opt(bound.map(|b| b.bound))),
            (
                "limit_witness",
                bound.map_or(Cell::Empty, |b| {
                    Cell::Text(serde_json::to_value(b.witness_kind).unwrap().as_str().unwrap().to_string())
                }),
            ),
            ("ratio_hinf", opt(self.limit.hinf.map(|p| p.value))),
            ("limit_holds", flag(self.limit.holds)),
            ("poisson_agrees", flag(self.limit.poisson_agrees)),
        ]
    }

    pub fn write_csv(&self, path: &Path) -> CliResult<()> {
        let mut t = Table::create(path, &["quantity".into(), "value".into()])?;
        for (k, v) in self.rows() {
            t.row(&[Cell::Text(k.into()), v])?;
        }
        t.finish()
    }

    pub fn write_json(&self, path: &Path) -> CliResult<()> {
        let mut f = create_file(path)?;
        writeln!(f, "{}", self.to_json()?)?;
        Ok(())
    }
}

/// Fixed-point rendering for terminal output.
pub fn show(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        extended::format_extended(v)
    }
}
