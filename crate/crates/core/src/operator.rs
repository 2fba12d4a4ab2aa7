//! The differenced-Gegenbauer reproducing kernel and its convolution operator.
//!
//! For a lacunary spectrum {n_k} with gap parameter ℓ,
//!
//! ```text
//! H(t)  = Σ_k c_{n_k} Σ_{j=0}^ℓ (-1)^j binom(ℓ,j) R_{n_k+2j}(t)
//! Tg(x) = (1/ω_d) ∫_{S^d} g(y) H(x·y) dσ(y)
//! ```
//!
//! By Funk–Hecke, T multiplies the degree-(n_k+2j) component of g by
//! (-1)^j binom(ℓ,j) c_{n_k}/c_{n_k+2j} and annihilates every other degree.
//! With c_n = ((n+λ)/λ) C_n^λ(1) (the dimension of the degree-n harmonics)
//! this gives Tf = f on the lacunary class.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyspace::{LacunarySpectrum, Polynomial, S2Polynomial, ZonalPolynomial};
use crate::quadrature::{cached_rule, zonal_sup_norm, SphereGridS2};
use crate::specfun::{binomial_row, gegenbauer_at_one, normalized_table_into, DimensionParams};

/// c_n = ((n+λ)/λ)·C_n^λ(1), the reproducing constant for degree-n harmonics.
pub fn c_n(dim: &DimensionParams, n: u32) -> Result<f64> {
    let lambda = dim.lambda();
    Ok((n as f64 + lambda) / lambda * gegenbauer_at_one(lambda, n)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproducingKernel {
    spectrum: LacunarySpectrum,
    dim: DimensionParams,
    expansion: ZonalPolynomial,
    multipliers: BTreeMap<u32, f64>,
}

pub fn build_kernel(spectrum: &LacunarySpectrum, dim: DimensionParams) -> Result<ReproducingKernel> {
    let binom = binomial_row(spectrum.ell());
    let mut coeffs = BTreeMap::new();
    let mut multipliers = BTreeMap::new();
    for &n in spectrum.degrees() {
        let base = c_n(&dim, n)?;
        for (j, &b) in binom.iter().enumerate() {
            let degree = n + 2 * j as u32;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let ratio = base / c_n(&dim, degree)?;
            let clash = coeffs.insert(degree, sign * b * base).is_some();
            multipliers.insert(degree, sign * b * ratio);
            if clash {
                return Err(Error::Precondition(format!("kernel degree {degree} collides")));
            }
        }
    }
    let expansion = ZonalPolynomial::new(dim, coeffs)?;
    Ok(ReproducingKernel { spectrum: spectrum.clone(), dim, expansion, multipliers })
}

impl ReproducingKernel {
    pub fn spectrum(&self) -> &LacunarySpectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> &DimensionParams {
        &self.dim
    }

    /// H as a zonal polynomial.
    pub fn expansion(&self) -> &ZonalPolynomial {
        &self.expansion
    }

    pub fn multipliers(&self) -> &BTreeMap<u32, f64> {
        &self.multipliers
    }

    pub fn multiplier(&self, degree: u32) -> f64 {
        self.multipliers.get(&degree).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> u32 {
        self.expansion.degree()
    }
}

/// Tg in coefficient space.
pub fn apply_t(g: &Polynomial, kernel: &ReproducingKernel) -> Result<Polynomial> {
    if g.d() != kernel.dim.d() {
        return Err(Error::DimensionMismatch { left: g.d(), right: kernel.dim.d() });
    }
    Ok(match g {
        Polynomial::Zonal(f) => Polynomial::Zonal(ZonalPolynomial::new(
            kernel.dim,
            f.coeffs().iter().map(|(&k, &a)| (k, a * kernel.multiplier(k))),
        )?),
        Polynomial::S2(f) => Polynomial::S2(S2Polynomial::new(
            f.blocks()
                .iter()
                .filter(|(n, _)| kernel.multipliers.contains_key(n))
                .map(|(&n, block)| (n, block.iter().map(|c| c * kernel.multiplier(n)).collect())),
        )?),
    })
}

/// Tg at every node of an S² grid by direct quadrature of the convolution.
///
/// `values` holds g on `grid`, and `signal_degree` bounds deg g; the grid
/// must integrate polynomials of degree deg g + deg H exactly. With
/// equispaced azimuths, x·y depends only on the two polar indices and the
/// azimuth offset, so H is tabulated once per (i, j, offset).
pub fn apply_t_by_convolution(
    values: &[f64],
    signal_degree: u32,
    kernel: &ReproducingKernel,
    grid: &SphereGridS2,
) -> Result<Vec<f64>> {
    if kernel.dim.d() != 2 {
        return Err(Error::DimensionMismatch { left: 2, right: kernel.dim.d() });
    }
    grid.check_len(values)?;
    let needed = signal_degree + kernel.degree();
    if grid.capacity_degree() < needed {
        return Err(Error::Capacity { needed, available: grid.capacity_degree() });
    }
    let polar = grid.polar();
    let z = polar.nodes();
    let sines: Vec<f64> = z.iter().map(|t| (1.0 - t * t).max(0.0).sqrt()).collect();
    let m = grid.azimuth_count();
    let cos_offset: Vec<f64> = (0..m).map(|k| grid.azimuth(k).cos()).collect();
    let azimuth_weight = 2.0 * std::f64::consts::PI / m as f64;
    let scale = azimuth_weight / kernel.dim.omega();
    let h = &kernel.expansion;

    let rows: Vec<Vec<f64>> = (0..z.len())
        .into_par_iter()
        .map(|i| {
            let mut scratch = h.scratch();
            let mut table = vec![0.0; m];
            let mut row = vec![0.0; m];
            for (j, (&zj, &wj)) in z.iter().zip(polar.weights()).enumerate() {
                for (k, entry) in table.iter_mut().enumerate() {
                    let t = z[i] * zj + sines[i] * sines[j] * cos_offset[k];
                    *entry = h.eval_with(t, &mut scratch);
                }
                let g_row = &values[j * m..(j + 1) * m];
                for (a, out) in row.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (b, &gb) in g_row.iter().enumerate() {
                        acc += gb * table[(a + m - b) % m];
                    }
                    *out += wj * acc;
                }
            }
            row.iter_mut().for_each(|v| *v *= scale);
            row
        })
        .collect();
    Ok(rows.concat())
}

/// ‖Tf - f‖_∞ / ‖f‖_∞ over coefficients, for f supported on the kernel spectrum.
pub fn reproducing_residual(f: &Polynomial, kernel: &ReproducingKernel) -> Result<f64> {
    if let Some(k) = f.support().into_iter().find(|k| !kernel.spectrum.contains(*k)) {
        return Err(Error::SpectrumNotContained { degree: k });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let tf = apply_t(f, kernel)?;
    let diff = match (&tf, f) {
        (Polynomial::Zonal(a), Polynomial::Zonal(b)) => {
            b.coeffs().iter().map(|(&k, &x)| (a.coeff(k) - x).abs()).fold(0.0, f64::max)
        }
        (Polynomial::S2(a), Polynomial::S2(b)) => b
            .blocks()
            .iter()
            .flat_map(|(n, block)| {
                let image = a.blocks().get(n);
                block.iter().enumerate().map(move |(i, x)| (image.map_or(0.0, |v| v[i]) - x).abs())
            })
            .fold(0.0, f64::max),
        _ => unreachable!("apply_t preserves the kind"),
    };
    Ok(diff / f.coeff_sup())
}

/// Measured ‖H‖_∞ against the constant-free reference m·n^{d-1-ℓ₀}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelNormReport {
    pub measured: f64,
    pub reference: f64,
    pub ratio: f64,
}

/// The reference uses max(m, 1) and max(n, 1).
pub fn kernel_sup_norm_report(kernel: &ReproducingKernel, grid_size: usize) -> KernelNormReport {
    let measured = zonal_sup_norm(&kernel.expansion, grid_size);
    let spectrum = &kernel.spectrum;
    let exponent = kernel.dim.d() as f64 - 1.0 - kernel.dim.ell0(spectrum.ell());
    let reference = spectrum.m().max(1) as f64 * (spectrum.top().max(1) as f64).powf(exponent);
    KernelNormReport { measured, reference, ratio: measured / reference }
}

/// sup |multiplier|, the exact L²→L² norm of T.
pub fn l2_operator_norm_bound(kernel: &ReproducingKernel) -> f64 {
    kernel.multipliers.values().fold(0.0, |m, v| m.max(v.abs()))
}

/// a_k = (c_k/ω_d)·∫ f(x·e) R_k(x·e) dσ(x) by Gauss–Jacobi quadrature.
///
/// Reads the R_k-coefficient of a zonal function back through the Funk–Hecke
/// inner product, independently of the stored coefficients.
pub fn zonal_projection_coefficient(f: &ZonalPolynomial, k: u32) -> Result<f64> {
    let dim = f.dim();
    let alpha = dim.jacobi_alpha();
    let rule = cached_rule(alpha, alpha, (f.degree() as usize + k as usize) / 2 + 1)?;
    let mut scratch = f.scratch();
    let mut table = vec![0.0; k as usize + 1];
    let integral: f64 = rule
        .0
        .iter()
        .zip(&rule.1)
        .map(|(&t, &w)| {
            normalized_table_into(dim.lambda(), t, &mut table);
            w * f.eval_with(t, &mut scratch) * table[k as usize]
        })
        .sum();
    Ok(c_n(dim, k)? / dim.omega() * dim.omega_lower() * integral)
}

/// Regression-fixture form of a kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelExport {
    pub v: u32,
    pub d: u32,
    pub ell: u32,
    pub spectrum: Vec<u32>,
    /// [degree, coefficient of R_degree in H]
    pub expansion: Vec<(u32, f64)>,
    /// [degree, multiplier]
    pub multipliers: Vec<(u32, f64)>,
}

impl ReproducingKernel {
    pub fn export(&self) -> KernelExport {
        KernelExport {
            v: 1,
            d: self.dim.d(),
            ell: self.spectrum.ell(),
            spectrum: self.spectrum.degrees().to_vec(),
            expansion: self.expansion.coeffs().iter().map(|(&k, &a)| (k, a)).collect(),
            multipliers: self.multipliers.iter().map(|(&k, &a)| (k, a)).collect(),
        }
    }
}

/// Largest degree accepted in an imported kernel.
pub const MAX_IMPORT_DEGREE: u32 = 1 << 14;

/// Rebuilds a kernel from its export and checks the stored tables against it.
pub fn kernel_from_json(text: &str) -> Result<ReproducingKernel> {
    let raw: KernelExport = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.v != 1 {
        return Err(Error::Parse(format!("unsupported kernel schema version {}", raw.v)));
    }
    if raw.spectrum.iter().any(|&n| n > MAX_IMPORT_DEGREE) || raw.ell > 64 || raw.d > 64 {
        return Err(Error::Parse("kernel exceeds import limits".into()));
    }
    let spectrum = crate::polyspace::validate_spectrum(&raw.spectrum, raw.ell)?;
    let kernel = build_kernel(&spectrum, DimensionParams::new(raw.d)?)?;
    let matches = |stored: &[(u32, f64)], built: &BTreeMap<u32, f64>| {
        stored.len() == built.len()
            && stored
                .iter()
                .zip(built)
                .all(|(&(k, a), (&kb, &b))| k == kb && a.is_finite() && (a - b).abs() <= 1e-12 * b.abs().max(1.0))
    };
    if !matches(&raw.expansion, kernel.expansion.coeffs()) {
        return Err(Error::Parse("stored expansion does not match the spectrum".into()));
    }
    if !matches(&raw.multipliers, &kernel.multipliers) {
        return Err(Error::Parse("stored multipliers do not match the spectrum".into()));
    }
    Ok(kernel)
}
