use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{exponent_fit, maximize_ratio, ExponentFit, SearchOptions};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::polyspace::{
    norm_quotient, random_lacunary_zonal, CoefficientDistribution, LacunarySpectrum, NikolskiiReport, NormOptions,
    Polynomial, ZonalPolynomial,
};
use crate::specfun::DimensionParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    SingleHarmonic,
    LacunaryRandom,
    LacunaryExtremal,
}

impl SweepFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepFamily::SingleHarmonic => "single_harmonic",
            SweepFamily::LacunaryRandom => "lacunary_random",
            SweepFamily::LacunaryExtremal => "lacunary_extremal",
        }
    }
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "single_harmonic" => Ok(SweepFamily::SingleHarmonic),
            "lacunary_random" => Ok(SweepFamily::LacunaryRandom),
            "lacunary_extremal" => Ok(SweepFamily::LacunaryExtremal),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// How many terms a lacunary sweep point carries at degree n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MRule {
    Fixed(u32),
    /// m = ⌊n/(2ℓ+1)⌋.
    MaxPacked,
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Fixed(m) => write!(f, "{m}"),
            MRule::MaxPacked => f.write_str("max-packed"),
        }
    }
}

impl FromStr for MRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "max-packed" | "max_packed" | "max") {
            return Ok(MRule::MaxPacked);
        }
        let digits = s.strip_prefix("fixed:").unwrap_or(s);
        digits.parse().map(MRule::Fixed).map_err(|_| Error::Parse(format!("bad m rule {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub dim: DimensionParams,
    pub ell: u32,
    pub p: Exponent,
    pub q: Exponent,
    pub n_grid: Vec<u32>,
    pub m_rule: MRule,
    pub seed: u64,
    /// Used by the extremal family; its seed is replaced per point.
    pub search: SearchOptions,
    pub norm: NormOptions,
}

/// One CSV row, fields in output column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: SweepFamily,
    pub d: u32,
    pub l: u32,
    pub l0: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub n: u32,
    pub m: u32,
    pub ratio: f64,
    pub theorem_bound: f64,
    pub coarse_bound: f64,
    pub classical_bound: f64,
    pub ratio_over_bound: f64,
    pub seed: u64,
}

pub const SWEEP_CSV_HEADER: &str =
    "family,d,l,l0,p,q,n,m,ratio,theorem_bound,coarse_bound,classical_bound,ratio_over_bound,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub report: NikolskiiReport,
    pub row: SweepRow,
    /// The polynomial whose ratio was measured.
    pub function: Polynomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by n.
    pub points: Vec<SweepPoint>,
    /// Fit of ratio against n; absent with fewer than 3 usable points.
    pub ratio_fit: Option<ExponentFit>,
    /// Fit of ratio/theorem_bound against n.
    pub bound_fit: Option<ExponentFit>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<SweepRow> {
        self.points.iter().map(|p| p.row.clone()).collect()
    }

    /// max/min of ratio/theorem_bound over the grid.
    pub fn bound_spread(&self) -> f64 {
        crate::specfun::spread(self.points.iter().map(|p| p.row.ratio_over_bound))
    }

    /// Largest ratio/theorem_bound on the grid.
    pub fn fitted_constant(&self) -> f64 {
        self.points.iter().map(|p| p.row.ratio_over_bound).fold(0.0, f64::max)
    }
}

/// Seed used for the point at degree n; a fixed mix of the sweep seed and n.
pub fn point_seed(seed: u64, n: u32) -> u64 {
    seed ^ (n as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn spectrum_at(n: u32, ell: u32, rule: MRule) -> Result<LacunarySpectrum> {
    match rule {
        MRule::Fixed(m) => LacunarySpectrum::packed(n, m, ell),
        MRule::MaxPacked => LacunarySpectrum::max_packed(n, ell),
    }
}

fn measure(cfg: &SweepConfig, n: u32) -> Result<SweepPoint> {
    let dim = cfg.dim;
    let (function, m, ratio) = match cfg.family {
        SweepFamily::SingleHarmonic => {
            let f: Polynomial = ZonalPolynomial::single(dim, n, 1.0)?.into();
            let ratio = norm_quotient(&f, cfg.p, cfg.q, &cfg.norm)?;
            (f, 0, ratio)
        }
        SweepFamily::LacunaryRandom => {
            let spectrum = spectrum_at(n, cfg.ell, cfg.m_rule)?;
            let f: Polynomial =
                random_lacunary_zonal(&spectrum, dim, point_seed(cfg.seed, n), &CoefficientDistribution::Signs)?.into();
            let ratio = norm_quotient(&f, cfg.p, cfg.q, &cfg.norm)?;
            (f, spectrum.m(), ratio)
        }
        SweepFamily::LacunaryExtremal => {
            let spectrum = spectrum_at(n, cfg.ell, cfg.m_rule)?;
            if cfg.p == cfg.q {
                let f: Polynomial = ZonalPolynomial::single(dim, n, 1.0)?.into();
                (f, spectrum.m(), 1.0)
            } else {
                let opts = SearchOptions { seed: point_seed(cfg.seed, n), s2: false, norm: cfg.norm, ..cfg.search };
                let report = maximize_ratio(&spectrum, dim, cfg.p, cfg.q, &opts)?;
                (report.best_polynomial()?, spectrum.m(), report.best_ratio)
            }
        }
    };
    let report = NikolskiiReport::new(dim.d(), n, m, cfg.ell, cfg.p, cfg.q, ratio);
    let row = SweepRow {
        family: cfg.family,
        d: dim.d(),
        l: cfg.ell,
        l0: report.ell0,
        p: cfg.p,
        q: cfg.q,
        n,
        m,
        ratio,
        theorem_bound: report.theorem_bound,
        coarse_bound: report.coarse_bound,
        classical_bound: report.classical_bound,
        ratio_over_bound: report.ratio_over_bound(),
        seed: cfg.seed,
    };
    Ok(SweepPoint { report, row, function })
}

fn fit_of(points: &[SweepPoint], value: impl Fn(&SweepRow) -> f64) -> Result<Option<ExponentFit>> {
    let usable: Vec<(u32, f64)> = points.iter().filter(|p| p.row.n >= 2).map(|p| (p.row.n, value(&p.row))).collect();
    let distinct = usable.windows(2).filter(|w| w[0].0 != w[1].0).count() + 1;
    if usable.len() < 3 || distinct < 2 {
        return Ok(None);
    }
    exponent_fit(&usable).map(Some)
}

/// Measures one family across the degree grid, in parallel, sorted by n.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.ell == 0 {
        return Err(Error::Precondition("gap parameter ℓ must be positive".into()));
    }
    if cfg.n_grid.is_empty() {
        return Err(Error::Precondition("degree grid is empty".into()));
    }
    let mut grid = cfg.n_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let points = grid.par_iter().map(|&n| measure(cfg, n)).collect::<Result<Vec<_>>>()?;
    let ratio_fit = fit_of(&points, |r| r.ratio)?;
    let bound_fit = fit_of(&points, |r| r.ratio_over_bound)?;
    Ok(SweepResult { points, ratio_fit, bound_fit })
}
