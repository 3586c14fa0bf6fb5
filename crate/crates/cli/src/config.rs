//! TOML system description.
//!
//! ```toml
//! name = "three-pole fault example"
//! orientation = "iig"
//! tau = 20.0
//!
//! [first]
//! label = "T_fr"
//! num_roots = [-0.1, -0.2, -0.6]
//! den_roots = [-0.3, -0.4, -0.5]
//!
//! [second]
//! label = "T_dr"
//! num_roots = [-1.0, 0.04, "TAU"]
//! den = [0.06, 0.47, 1.2, 1.0]
//! ```
//!
//! Coefficients are ascending. A root entry is a real number, the token
//! `"TAU"`, or `[re, im]` standing for the pair `re ± j im`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use stealth_gain::{Complex64, Orientation, Polynomial, TransferFunction};

use crate::error::{CliError, CliResult};

pub const TAU_TOKEN: &str = "TAU";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootEntry {
    Real(f64),
    Token(String),
    Pair([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_roots: Option<Vec<RootEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den_roots: Option<Vec<RootEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den_gain: Option<f64>,
}

/// Two channels: `(T_ayr, T_ayp)` for `oog`, `(T_fr, T_dr)` for `iig`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub name: String,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub first: ChannelConfig,
    pub second: ChannelConfig,
}

#[derive(Debug, Clone)]
pub struct System {
    pub first: TransferFunction,
    pub second: TransferFunction,
}

impl SystemConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: SystemConfig = toml::from_str(text).map_err(|e| CliError::invalid(e.message().to_string()))?;
        cfg.first.validate("first")?;
        cfg.second.validate("second")?;
        if cfg.uses_tau() && cfg.tau.is_none() {
            // Allowed here; commands that need a value ask for one.
        } else if !cfg.uses_tau() && cfg.tau.is_some() {
            return Err(CliError::invalid("tau is set but no root list uses the TAU token"));
        }
        Ok(cfg)
    }

    pub fn uses_tau(&self) -> bool {
        self.first.uses_tau() || self.second.uses_tau()
    }

    pub fn label(&self, which: Which) -> String {
        let (ch, default) = match (which, self.orientation) {
            (Which::First, Orientation::Oog) => (&self.first, "T_ayr"),
            (Which::Second, Orientation::Oog) => (&self.second, "T_ayp"),
            (Which::First, Orientation::Iig) => (&self.first, "T_fr"),
            (Which::Second, Orientation::Iig) => (&self.second, "T_dr"),
        };
        ch.label.clone().unwrap_or_else(|| default.to_string())
    }

    /// Builds both channels, substituting `tau` (or the configured value)
    /// for the TAU token.
    pub fn build(&self, tau: Option<f64>) -> CliResult<System> {
        let tau = tau.or(self.tau);
        if self.uses_tau() && tau.is_none() {
            return Err(CliError::invalid("a root list uses TAU but no tau value is given"));
        }
        Ok(System {
            first: self.first.build("first", tau)?,
            second: self.second.build("second", tau)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

impl ChannelConfig {
    fn validate(&self, name: &str) -> CliResult<()> {
        for (part, coeffs, roots, gain) in [
            ("num", &self.num, &self.num_roots, self.num_gain),
            ("den", &self.den, &self.den_roots, self.den_gain),
        ] {
            match (coeffs, roots) {
                (Some(_), Some(_)) => {
                    return Err(CliError::invalid(format!("[{name}] gives both {part} and {part}_roots")))
                }
                (None, None) => return Err(CliError::invalid(format!("[{name}] needs {part} or {part}_roots"))),
                (Some(c), None) => {
                    if gain.is_some() {
                        return Err(CliError::invalid(format!("[{name}] {part}_gain only applies to {part}_roots")));
                    }
                    if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
                        return Err(CliError::invalid(format!("[{name}] {part} must be finite and nonempty")));
                    }
                }
                (None, Some(r)) => {
                    for entry in r {
                        match entry {
                            RootEntry::Token(t) if t != TAU_TOKEN => {
                                return Err(CliError::invalid(format!(
                                    "[{name}] unknown token {t:?} in {part}_roots"
                                )))
                            }
                            RootEntry::Real(v) if !v.is_finite() => {
                                return Err(CliError::invalid(format!("[{name}] non-finite root in {part}_roots")))
                            }
                            RootEntry::Pair([a, b]) if !a.is_finite() || !b.is_finite() => {
                                return Err(CliError::invalid(format!("[{name}] non-finite root in {part}_roots")))
                            }
                            _ => {}
                        }
                    }
                    if gain.is_some_and(|g| !g.is_finite() || g == 0.0) {
                        return Err(CliError::invalid(format!("[{name}] {part}_gain must be finite and nonzero")));
                    }
                }
            }
        }
        Ok(())
    }

    fn uses_tau(&self) -> bool {
        [&self.num_roots, &self.den_roots]
            .into_iter()
            .flatten()
            .flatten()
            .any(|r| matches!(r, RootEntry::Token(_)))
    }

    fn build(&self, name: &str, tau: Option<f64>) -> CliResult<TransferFunction> {
        let num = polynomial(&self.num, &self.num_roots, self.num_gain, tau)?;
        let den = polynomial(&self.den, &self.den_roots, self.den_gain, tau)?;
        TransferFunction::new(num, den).map_err(|e| CliError::invalid(format!("[{name}] {e}")))
    }
}

fn polynomial(
    coeffs: &Option<Vec<f64>>,
    roots: &Option<Vec<RootEntry>>,
    gain: Option<f64>,
    tau: Option<f64>,
) -> CliResult<Polynomial> {
    if let Some(c) = coeffs {
        return Ok(Polynomial::new(c.clone()));
    }
    let mut out = Vec::new();
    for entry in roots.as_deref().unwrap_or_default() {
        match entry {
            RootEntry::Real(v) => out.push(Complex64::new(*v, 0.0)),
            RootEntry::Token(_) => out.push(Complex64::new(tau.expect("checked by the caller"), 0.0)),
            RootEntry::Pair([re, im]) if *im == 0.0 => out.push(Complex64::new(*re, 0.0)),
            RootEntry::Pair([re, im]) => {
                out.push(Complex64::new(*re, im.abs()));
                out.push(Complex64::new(*re, -im.abs()));
            }
        }
    }
    Polynomial::from_roots(&out, gain.unwrap_or(1.0)).map_err(CliError::from)
}
