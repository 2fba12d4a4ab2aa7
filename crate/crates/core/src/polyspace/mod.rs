//! Zonal and S² polynomials, the lacunary class, and Nikolskii ratios/bounds.

mod bounds;
mod json;
mod lacunary;
mod s2;
mod zonal;

pub use bounds::{theorem_bound, BoundSet, HypothesisWarning, NikolskiiReport};
pub use json::{polynomial_from_json, polynomial_to_json, POLYNOMIAL_SCHEMA_VERSION};
pub use lacunary::{
    random_lacunary_s2, random_lacunary_zonal, validate_spectrum, CoefficientDistribution, LacunarySpectrum,
};
pub use s2::{normalized_legendre_table, synthesize_s2, S2Polynomial};
pub use zonal::ZonalPolynomial;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::quadrature::{s2_lp_norm, zonal_lp_norm, zonal_sup_norm, SphereGridS2, DEFAULT_TOL};
use crate::specfun::DimensionParams;

/// A polynomial on S^d, zonal in any dimension or general on S².
#[derive(Debug, Clone, PartialEq)]
pub enum Polynomial {
    Zonal(ZonalPolynomial),
    S2(S2Polynomial),
}

impl Polynomial {
    pub fn d(&self) -> u32 {
        match self {
            Polynomial::Zonal(f) => f.dim().d(),
            Polynomial::S2(_) => 2,
        }
    }

    pub fn dim(&self) -> DimensionParams {
        match self {
            Polynomial::Zonal(f) => *f.dim(),
            Polynomial::S2(_) => DimensionParams::new(2).expect("d = 2 is valid"),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Polynomial::Zonal(f) => f.degree(),
            Polynomial::S2(f) => f.degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Polynomial::Zonal(f) => f.is_zero(),
            Polynomial::S2(f) => f.is_zero(),
        }
    }

    pub fn support(&self) -> Vec<u32> {
        match self {
            Polynomial::Zonal(f) => f.support().collect(),
            Polynomial::S2(f) => f.support().collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Ok(match self {
            Polynomial::Zonal(f) => Polynomial::Zonal(f.scaled(c)?),
            Polynomial::S2(f) => Polynomial::S2(f.scaled(c)?),
        })
    }

    /// Max absolute coefficient.
    pub fn coeff_sup(&self) -> f64 {
        match self {
            Polynomial::Zonal(f) => f.coeff_sup(),
            Polynomial::S2(f) => f.coeff_sup(),
        }
    }
}

impl From<ZonalPolynomial> for Polynomial {
    fn from(f: ZonalPolynomial) -> Self {
        Polynomial::Zonal(f)
    }
}

impl From<S2Polynomial> for Polynomial {
    fn from(f: S2Polynomial) -> Self {
        Polynomial::S2(f)
    }
}

/// Knobs for norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Relative tolerance of the adaptive zonal norm (non-even p).
    pub tol: f64,
    /// Minimum t-grid size for zonal sup norms.
    pub sup_grid: usize,
    /// Polar nodes per unit degree for S² grids when p is not an even integer.
    pub s2_oversample: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, sup_grid: 0, s2_oversample: 8 }
    }
}

/// S² grid used to evaluate ‖f‖_p for a polynomial of the given degree.
///
/// Even p gets the smallest grid exact for f^p; anything else gets a fixed
/// oversampled grid, so those norms are quadrature approximations.
pub fn s2_norm_grid(degree: u32, p: Exponent, opts: &NormOptions) -> Result<SphereGridS2> {
    match p.even_half() {
        Some(half) => SphereGridS2::with_capacity(2 * half * degree),
        None => {
            let polar = opts.s2_oversample.max(1) * (degree as usize + 1);
            SphereGridS2::new(polar, 2 * polar + 1)
        }
    }
}

/// ‖f‖_p on S^d.
pub fn lp_norm(f: &Polynomial, p: Exponent, opts: &NormOptions) -> Result<f64> {
    match f {
        Polynomial::Zonal(g) => match p {
            Exponent::Infinite => Ok(zonal_sup_norm(g, opts.sup_grid)),
            Exponent::Finite(p) => zonal_lp_norm(g, p, opts.tol),
        },
        Polynomial::S2(g) => {
            if g.is_zero() {
                return Ok(0.0);
            }
            if p == Exponent::Finite(2.0) {
                return Ok(g.coefficient_energy().sqrt());
            }
            let grid = s2_norm_grid(g.degree(), p, opts)?;
            let values = synthesize_s2(g, &grid)?;
            s2_lp_norm(&values, &grid, p)
        }
    }
}

/// ‖f‖_q / ‖f‖_p for 0 < p < q ≤ ∞.
pub fn nikolskii_ratio(f: &Polynomial, p: Exponent, q: Exponent, opts: &NormOptions) -> Result<f64> {
    if !(p < q) {
        return Err(Error::Precondition(format!("need p < q, got p={p}, q={q}")));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    norm_quotient(f, p, q, opts)
}

/// ‖f‖_q / ‖f‖_p without ordering checks; exactly 1 when p = q.
pub fn norm_quotient(f: &Polynomial, p: Exponent, q: Exponent, opts: &NormOptions) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p == q {
        return Ok(1.0);
    }
    Ok(lp_norm(f, q, opts)? / lp_norm(f, p, opts)?)
}
