use std::fmt;
use std::str::FromStr;

use lacunary_core::search::{MRule, SweepFamily};
use lacunary_core::specfun::dyadic;
use lacunary_core::Exponent;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// Longest spectrum or degree grid accepted from text.
pub const MAX_LIST_LEN: usize = 4096;
/// Largest degree accepted from text.
pub const MAX_DEGREE: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Kernel,
    Bounds,
    Reproduce,
    Ratio,
    Sweep,
    Search,
    QuadCheck,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Bounds => "bounds",
            Command::Reproduce => "reproduce",
            Command::Ratio => "ratio",
            Command::Sweep => "sweep",
            Command::Search => "search",
            Command::QuadCheck => "quad-check",
        }
    }

    /// Whether the command takes a spectrum (otherwise a degree grid).
    pub fn takes_spectrum(&self) -> bool {
        matches!(self, Command::Kernel | Command::Reproduce | Command::Ratio | Command::Search)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn parse_degree(item: &str) -> Result<u32, String> {
    let n: u32 = item.trim().parse().map_err(|_| format!("{item:?} is not a nonnegative integer"))?;
    if n > MAX_DEGREE {
        return Err(format!("degree {n} exceeds {MAX_DEGREE}"));
    }
    Ok(n)
}

fn parse_list(text: &str) -> Result<Vec<u32>, String> {
    if text.trim().is_empty() {
        return Err("empty list".into());
    }
    let items: Vec<&str> = text.split(',').collect();
    if items.len() > MAX_LIST_LEN {
        return Err(format!("more than {MAX_LIST_LEN} entries"));
    }
    items.into_iter().map(parse_degree).collect()
}

/// `0,3,6`: degrees as given; ordering and gaps are checked later.
pub fn parse_spectrum(text: &str) -> Result<Vec<u32>, String> {
    parse_list(text)
}

/// `lo:hi:dyadic`, `lo:hi:step`, `lo:hi` (step 1) or a comma list.
pub fn parse_n_grid(text: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let grid = match parts.as_slice() {
        [_] => return parse_list(text),
        [lo, hi] => linear(parse_degree(lo)?, parse_degree(hi)?, 1)?,
        [lo, hi, "dyadic"] => {
            let (lo, hi) = (parse_degree(lo)?, parse_degree(hi)?);
            if lo == 0 || lo > hi {
                return Err(format!("dyadic range needs 0 < lo ≤ hi, got {lo}:{hi}"));
            }
            dyadic(lo, hi)
        }
        [lo, hi, step] => {
            let step: u32 = step.trim().parse().map_err(|_| format!("bad step {step:?}"))?;
            linear(parse_degree(lo)?, parse_degree(hi)?, step)?
        }
        _ => return Err(format!("bad degree grid {text:?}")),
    };
    Ok(grid)
}

fn linear(lo: u32, hi: u32, step: u32) -> Result<Vec<u32>, String> {
    if step == 0 || lo > hi {
        return Err(format!("range needs lo ≤ hi and step > 0, got {lo}:{hi}:{step}"));
    }
    if ((hi - lo) / step) as usize >= MAX_LIST_LEN {
        return Err(format!("range has more than {MAX_LIST_LEN} entries"));
    }
    Ok((lo..=hi).step_by(step as usize).collect())
}

pub fn parse_exponent(text: &str) -> Result<Exponent, String> {
    text.parse::<Exponent>().map_err(|e| e.to_string())
}

pub fn parse_family(text: &str) -> Result<SweepFamily, String> {
    text.parse().map_err(|e: lacunary_core::Error| e.to_string())
}

pub fn parse_m_rule(text: &str) -> Result<MRule, String> {
    text.parse().map_err(|e: lacunary_core::Error| e.to_string())
}

/// Serializes through Display/FromStr so configs read as plain strings.
mod as_string {
    use super::*;

    pub fn serialize<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: fmt::Display,
        D: Deserializer<'de>,
    {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

mod as_string_opt {
    use super::*;

    pub fn serialize<T: fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: fmt::Display,
        D: Deserializer<'de>,
    {
        Option::<String>::deserialize(d)?.map(|t| t.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

/// A fully resolved run; embedded verbatim in every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub d: u32,
    pub l: u32,
    pub p: Exponent,
    pub q: Exponent,
    pub spectrum: Option<Vec<u32>>,
    pub n_grid: Option<Vec<u32>>,
    pub seed: u64,
    pub grid_size: usize,
    pub tol: f64,
    pub format: Format,
    #[serde(with = "as_string")]
    pub family: SweepFamily,
    #[serde(with = "as_string")]
    pub m_rule: MRule,
    pub restarts: usize,
    pub budget: usize,
    pub s2: bool,
}

/// Config fields that may be left open; the shape of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub d: Option<u32>,
    pub l: Option<u32>,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub spectrum: Option<Vec<u32>>,
    pub n_grid: Option<Vec<u32>>,
    pub seed: Option<u64>,
    pub grid_size: Option<usize>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    #[serde(default, with = "as_string_opt")]
    pub family: Option<SweepFamily>,
    #[serde(default, with = "as_string_opt")]
    pub m_rule: Option<MRule>,
    pub restarts: Option<usize>,
    pub budget: Option<usize>,
    pub s2: Option<bool>,
}

pub const DEFAULT_GRID_SIZE: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_RESTARTS: usize = 4;
pub const DEFAULT_BUDGET: usize = 400;

impl PartialConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::validation("config", format!("config file: {e}")))
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            d: over.d.or(self.d),
            l: over.l.or(self.l),
            p: over.p.or(self.p),
            q: over.q.or(self.q),
            spectrum: over.spectrum.or(self.spectrum),
            n_grid: over.n_grid.or(self.n_grid),
            seed: over.seed.or(self.seed),
            grid_size: over.grid_size.or(self.grid_size),
            tol: over.tol.or(self.tol),
            format: over.format.or(self.format),
            family: over.family.or(self.family),
            m_rule: over.m_rule.or(self.m_rule),
            restarts: over.restarts.or(self.restarts),
            budget: over.budget.or(self.budget),
            s2: over.s2.or(self.s2),
        }
    }

    /// Fills defaults and checks that the command gets exactly the input it needs.
    pub fn resolve(self, command: Command) -> Result<RunConfig, CliError> {
        let d = self.d.ok_or_else(|| CliError::validation("missing_flag", "--d is required"))?;
        let (spectrum, n_grid) = if command.takes_spectrum() {
            if self.n_grid.is_some() {
                return Err(CliError::validation("flags", format!("{command} takes --spectrum, not --n")));
            }
            let s = self.spectrum.ok_or_else(|| CliError::validation("missing_flag", "--spectrum is required"))?;
            (Some(s), None)
        } else {
            if self.spectrum.is_some() {
                return Err(CliError::validation("flags", format!("{command} takes --n, not --spectrum")));
            }
            let n = self.n_grid.ok_or_else(|| CliError::validation("missing_flag", "--n is required"))?;
            (None, Some(n))
        };
        let config = RunConfig {
            command,
            d,
            l: self.l.unwrap_or(1),
            p: self.p.unwrap_or(Exponent::Finite(1.0)),
            q: self.q.unwrap_or(Exponent::Infinite),
            spectrum,
            n_grid,
            seed: self.seed.unwrap_or(0),
            grid_size: self.grid_size.unwrap_or(DEFAULT_GRID_SIZE),
            tol: self.tol.unwrap_or(DEFAULT_TOL),
            format: self.format.unwrap_or_default(),
            family: self.family.unwrap_or(SweepFamily::SingleHarmonic),
            m_rule: self.m_rule.unwrap_or(MRule::MaxPacked),
            restarts: self.restarts.unwrap_or(DEFAULT_RESTARTS),
            budget: self.budget.unwrap_or(DEFAULT_BUDGET),
            s2: self.s2.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    /// Checks ranges that do not depend on the command's numerics.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::validation("invalid_value", msg));
        if self.d < 2 {
            return bad(format!("--d must be ≥ 2, got {}", self.d));
        }
        if self.l == 0 {
            return bad("--l must be positive".into());
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if self.restarts == 0 || self.budget == 0 {
            return bad("--restarts and --budget must be positive".into());
        }
        for list in [&self.spectrum, &self.n_grid].into_iter().flatten() {
            if list.is_empty() || list.len() > MAX_LIST_LEN || list.iter().any(|&n| n > MAX_DEGREE) {
                return bad(format!("degree lists need 1..={MAX_LIST_LEN} entries ≤ {MAX_DEGREE}"));
            }
        }
        Ok(())
    }
}
