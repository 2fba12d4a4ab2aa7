//! Searches for large Nikolskii ratios and growth-exponent sweeps.

mod fit;
mod simplex;
mod sweep;

pub use fit::{exponent_fit, ExponentFit};
pub use simplex::{maximize, SimplexOptions, SimplexOutcome};
pub use sweep::{
    point_seed, sweep, MRule, SweepConfig, SweepFamily, SweepPoint, SweepResult, SweepRow, SWEEP_CSV_HEADER,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::polyspace::{
    lp_norm, norm_quotient, LacunarySpectrum, NormOptions, Polynomial, S2Polynomial, ZonalPolynomial,
};
use crate::specfun::DimensionParams;

/// Relative gain over the seed ratio that counts as an improvement; smaller
/// gains are within norm-evaluation noise.
pub const IMPROVEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Objective evaluations allowed per restart.
    pub budget: usize,
    /// Search over full S² blocks instead of zonal coefficients (d = 2 only).
    pub s2: bool,
    pub norm: NormOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: 4, seed: 0, budget: 400, s2: false, norm: NormOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// Some restart beat the single-harmonic seed.
    Improved,
    /// The budget ran out without beating restart 0's starting point.
    NoImprovement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub restart: usize,
    pub start_ratio: f64,
    pub final_ratio: f64,
    /// Best ratio over restarts 0..=restart.
    pub best_so_far: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub spectrum: LacunarySpectrum,
    pub d: u32,
    pub p: Exponent,
    pub q: Exponent,
    pub s2: bool,
    /// Zonal: one value per spectrum degree. S²: blocks concatenated in degree order.
    pub best_coefficients: Vec<f64>,
    pub best_ratio: f64,
    /// Ratio of the top-degree single harmonic.
    pub seed_ratio: f64,
    pub restarts_used: usize,
    pub evaluations: usize,
    pub status: SearchStatus,
    pub log: Vec<RestartRecord>,
}

impl ExtremalReport {
    /// The maximizer as a polynomial, with ‖f‖_p = 1.
    pub fn best_polynomial(&self) -> Result<Polynomial> {
        assemble(&self.spectrum, DimensionParams::new(self.d)?, self.s2, &self.best_coefficients)
    }
}

fn parameter_count(spectrum: &LacunarySpectrum, s2: bool) -> usize {
    if s2 {
        spectrum.degrees().iter().map(|&n| 2 * n as usize + 1).sum()
    } else {
        spectrum.degrees().len()
    }
}

fn assemble(spectrum: &LacunarySpectrum, dim: DimensionParams, s2: bool, x: &[f64]) -> Result<Polynomial> {
    let expected = parameter_count(spectrum, s2);
    if x.len() != expected {
        return Err(Error::LengthMismatch { expected, got: x.len() });
    }
    if !s2 {
        return Ok(ZonalPolynomial::new(dim, spectrum.degrees().iter().copied().zip(x.iter().copied()))?.into());
    }
    let mut blocks = Vec::with_capacity(spectrum.degrees().len());
    let mut offset = 0;
    for &n in spectrum.degrees() {
        let len = 2 * n as usize + 1;
        blocks.push((n, x[offset..offset + len].to_vec()));
        offset += len;
    }
    Ok(S2Polynomial::new(blocks)?.into())
}

/// Parameter vector of the top-degree zonal harmonic.
fn top_harmonic(spectrum: &LacunarySpectrum, s2: bool) -> Vec<f64> {
    let mut x = vec![0.0; parameter_count(spectrum, s2)];
    let last = x.len() - 1;
    if s2 {
        // zonal entry sits in the middle of the top block
        x[last - spectrum.top() as usize] = 1.0;
    } else {
        x[last] = 1.0;
    }
    x
}

/// Maximizes ‖f‖_q/‖f‖_p over polynomials supported on `spectrum`.
///
/// Restart 0 starts from the top-degree single harmonic; restart r ≥ 1 from a
/// Gaussian point drawn on ChaCha stream r of `seed`. Restarts run in
/// parallel and are merged by index, so the report depends only on the inputs.
pub fn maximize_ratio(
    spectrum: &LacunarySpectrum,
    dim: DimensionParams,
    p: Exponent,
    q: Exponent,
    opts: &SearchOptions,
) -> Result<ExtremalReport> {
    if !(p < q) {
        return Err(Error::Precondition(format!("need p < q, got p={p}, q={q}")));
    }
    if opts.restarts == 0 || opts.budget == 0 {
        return Err(Error::Precondition("restarts and budget must be positive".into()));
    }
    if opts.s2 && dim.d() != 2 {
        return Err(Error::Precondition(format!("S² block search needs d = 2, got d = {}", dim.d())));
    }
    let count = parameter_count(spectrum, opts.s2);
    let objective = |x: &[f64]| -> Result<f64> {
        let f = assemble(spectrum, dim, opts.s2, x)?;
        if f.is_zero() {
            return Ok(0.0);
        }
        norm_quotient(&f, p, q, &opts.norm)
    };
    let simplex = SimplexOptions { budget: opts.budget, ..SimplexOptions::default() };

    let outcomes: Vec<(f64, SimplexOutcome)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                top_harmonic(spectrum, opts.s2)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r as u64);
                (0..count).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
            };
            let start_ratio = objective(&start)?;
            let outcome = maximize(objective, &start, &simplex)?;
            Ok((start_ratio, outcome))
        })
        .collect::<Result<_>>()?;

    let seed_ratio = outcomes[0].0;
    let mut log = Vec::with_capacity(outcomes.len());
    let mut best_index = 0;
    let mut evaluations = 0;
    for (r, (start_ratio, outcome)) in outcomes.iter().enumerate() {
        // strict comparison keeps the lowest restart index on ties
        if outcome.value > outcomes[best_index].1.value {
            best_index = r;
        }
        evaluations += outcome.evaluations + 1;
        log.push(RestartRecord {
            restart: r,
            start_ratio: *start_ratio,
            final_ratio: outcome.value,
            best_so_far: outcomes[best_index].1.value,
            evaluations: outcome.evaluations + 1,
        });
    }
    let best = &outcomes[best_index].1;
    let f = assemble(spectrum, dim, opts.s2, &best.best)?;
    let norm = lp_norm(&f, p, &opts.norm)?;
    let best_coefficients = best.best.iter().map(|c| c / norm).collect();
    Ok(ExtremalReport {
        spectrum: spectrum.clone(),
        d: dim.d(),
        p,
        q,
        s2: opts.s2,
        best_coefficients,
        best_ratio: best.value,
        seed_ratio,
        restarts_used: opts.restarts,
        evaluations,
        status: if best.value > seed_ratio * (1.0 + IMPROVEMENT_TOL) {
            SearchStatus::Improved
        } else {
            SearchStatus::NoImprovement
        },
        log,
    })
}
