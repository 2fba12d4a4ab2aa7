//! Gegenbauer polynomials on S^d and degree-index differences.
//!
//! Conventions: `C_n^λ` is normalized by the generating function, so that
//! `C_1^λ(t) = 2λt`, and satisfies
//!
//! ```text
//! (n+1) C_{n+1}(t) = 2(n+λ) t C_n(t) - (n+2λ-1) C_{n-1}(t).
//! ```
//!
//! The normalized polynomial `R_n = C_n^λ / C_n^λ(1)` obeys the overflow-free
//! recurrence `(n+2λ) R_{n+1} = 2(n+λ) t R_n - n R_{n-1}`, which is what every
//! evaluation path in this crate uses.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient geometry of S^d: dimension, Gegenbauer index and surface areas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct DimensionParams {
    d: u32,
    lambda: f64,
    omega_d: f64,
    omega_dm1: f64,
}

impl DimensionParams {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("sphere dimension d={d} must be at least 2")));
        }
        Ok(Self { d, lambda: (d as f64 - 1.0) / 2.0, omega_d: sphere_area(d), omega_dm1: sphere_area(d - 1) })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// λ = (d-1)/2.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Surface area of S^d.
    pub fn omega(&self) -> f64 {
        self.omega_d
    }

    /// Surface area of S^{d-1}; the factor in the zonal reduction of ∫_{S^d}.
    pub fn omega_lower(&self) -> f64 {
        self.omega_dm1
    }

    /// Jacobi exponent (d-2)/2 of the zonal weight (1-t²)^{(d-2)/2}.
    pub fn jacobi_alpha(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }

    /// ℓ₀ = min(ℓ, (d-1)/2).
    pub fn ell0(&self, ell: u32) -> f64 {
        (ell as f64).min(self.lambda)
    }
}

impl TryFrom<u32> for DimensionParams {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<DimensionParams> for u32 {
    fn from(dim: DimensionParams) -> u32 {
        dim.d
    }
}

/// ω_k = 2π^{(k+1)/2}/Γ((k+1)/2), via ω_k = 2π ω_{k-2}/(k-1).
fn sphere_area(k: u32) -> f64 {
    let (mut area, start) = if k.is_multiple_of(2) { (2.0, 0) } else { (2.0 * PI, 1) };
    let mut j = start;
    while j < k {
        j += 2;
        area *= 2.0 * PI / (j as f64 - 1.0);
    }
    area
}

/// Order and step of the degree-index difference Δ_h^ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceSpec {
    order: u32,
    step: u32,
}

impl DifferenceSpec {
    pub fn new(order: u32, step: u32) -> Result<Self> {
        if step != 1 && step != 2 {
            return Err(Error::Domain(format!("difference step h={step} must be 1 or 2")));
        }
        Ok(Self { order, step })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    /// Highest degree touched: n + hℓ.
    pub fn reach(&self, n: u32) -> u32 {
        n + self.step * self.order
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("Gegenbauer index λ={lambda} must be positive")));
    }
    Ok(())
}

fn check_argument(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("argument t={t} outside [-1, 1]")));
    }
    Ok(())
}

/// C_n^λ(t) by forward recurrence from C_0 = 1, C_1 = 2λt.
pub fn gegenbauer_eval(lambda: f64, n: u32, t: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_argument(t)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 * (k + lambda) * t * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// C_n^λ(1) = ∏_{k<n} (2λ+k)/(k+1).
pub fn gegenbauer_at_one(lambda: f64, n: u32) -> Result<f64> {
    check_lambda(lambda)?;
    let mut value = 1.0f64;
    for k in 0..n {
        value *= (2.0 * lambda + k as f64) / (k as f64 + 1.0);
        if !value.is_finite() {
            return Err(Error::Overflow { degree: k + 1 });
        }
    }
    Ok(value)
}

/// Fills `out[k] = R_k(t)` for k = 0..out.len() in a single recurrence pass.
///
/// No domain checks; `t` should lie in [-1, 1].
pub fn normalized_table_into(lambda: f64, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = t;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = (2.0 * (kf + lambda) * t * out[k] - kf * out[k - 1]) / (kf + 2.0 * lambda);
    }
}

/// R_0(t), …, R_{max_degree}(t).
pub fn normalized_table(dim: &DimensionParams, max_degree: u32, t: f64) -> Result<Vec<f64>> {
    check_argument(t)?;
    let mut out = vec![0.0; max_degree as usize + 1];
    normalized_table_into(dim.lambda(), t, &mut out);
    Ok(out)
}

/// R_n(t) = C_n^λ(t)/C_n^λ(1) with λ = (d-1)/2.
pub fn normalized_eval(dim: &DimensionParams, n: u32, t: f64) -> Result<f64> {
    let table = normalized_table(dim, n, t)?;
    Ok(table[n as usize])
}

/// Binomial coefficients binom(ℓ, j) for j = 0..=ℓ, as floats.
pub fn binomial_row(ell: u32) -> Vec<f64> {
    let mut row = Vec::with_capacity(ell as usize + 1);
    let mut c = 1.0f64;
    row.push(c);
    for j in 1..=ell {
        c = c * (ell - j + 1) as f64 / j as f64;
        row.push(c);
    }
    row
}

/// Σ_j (-1)^j binom(ℓ,j) a_{n+hj} applied to a table of R_k values.
pub fn difference_from_table(table: &[f64], n: u32, spec: DifferenceSpec, binom: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (j, b) in binom.iter().enumerate() {
        let value = table[(n + spec.step() * j as u32) as usize];
        if j % 2 == 0 {
            acc += b * value;
        } else {
            acc -= b * value;
        }
    }
    acc
}

/// Δ_h^ℓ R_n(t) = Σ_{j=0}^ℓ (-1)^j binom(ℓ,j) R_{n+hj}(t).
pub fn difference_eval(dim: &DimensionParams, n: u32, spec: DifferenceSpec, t: f64) -> Result<f64> {
    let table = normalized_table(dim, spec.reach(n), t)?;
    Ok(difference_from_table(&table, n, spec, &binomial_row(spec.order())))
}

/// Right-hand envelope of the two-sided pointwise estimate for Δ₂^ℓ R_n,
/// without its constant: θ^ℓ(1+nθ)^{-(d-1)/2} on [0, π/2], reflected on [π/2, π].
pub fn bound_envelope(dim: &DimensionParams, n: u32, ell: u32, theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("angle θ={theta} outside [0, π]")));
    }
    let s = if theta <= PI / 2.0 { theta } else { PI - theta };
    Ok(s.powi(ell as i32) * (1.0 + n as f64 * s).powf(-dim.lambda()))
}

/// Degree-only envelope n^{-ℓ₀} = max{n^{-ℓ}, n^{-(d-1)/2}} bounding sup_θ |Δ₂^ℓ R_n|.
///
/// This is the supremum of [`bound_envelope`] over θ up to constants, and is the
/// rate the kernel norm estimate relies on. Degree 0 maps to 1.
pub fn global_envelope(dim: &DimensionParams, n: u32, ell: u32) -> f64 {
    (n.max(1) as f64).powf(-dim.ell0(ell))
}

/// Empirical constants of the Δ₂^ℓ kernel estimates at one degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeConstant {
    pub n: u32,
    /// max_θ |Δ₂^ℓ R_n(cos θ)| / bound_envelope(θ) over interior grid points.
    pub pointwise: f64,
    /// max_θ |Δ₂^ℓ R_n(cos θ)| / global_envelope(n).
    pub uniform: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundConstantReport {
    pub d: u32,
    pub ell: u32,
    pub grid_size: usize,
    pub per_degree: Vec<DegreeConstant>,
}

impl BoundConstantReport {
    /// Empirical constant of the pointwise estimate: the max over degrees.
    pub fn global_max(&self) -> f64 {
        self.per_degree.iter().map(|c| c.pointwise).fold(0.0, f64::max)
    }

    pub fn uniform_max(&self) -> f64 {
        self.per_degree.iter().map(|c| c.uniform).fold(0.0, f64::max)
    }

    /// max/min of the per-degree pointwise constants.
    pub fn pointwise_spread(&self) -> f64 {
        spread(self.per_degree.iter().map(|c| c.pointwise))
    }

    pub fn uniform_spread(&self) -> f64 {
        spread(self.per_degree.iter().map(|c| c.uniform))
    }
}

pub(crate) fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi / lo
}

pub const MIN_BOUND_GRID: usize = 64;

/// Measures the unspecified constants of the Δ₂^ℓ estimates on a uniform θ-grid.
///
/// Grid points are θ_i = iπ/grid_size for 0 < i < grid_size; the endpoints,
/// where both numerator and envelope vanish, are excluded.
pub fn empirical_bound_constant(
    dim: &DimensionParams,
    degrees: &[u32],
    ell: u32,
    grid_size: usize,
) -> Result<BoundConstantReport> {
    if degrees.is_empty() {
        return Err(Error::Precondition("degree list is empty".into()));
    }
    if ell == 0 {
        return Err(Error::Precondition("difference order ℓ must be positive".into()));
    }
    if grid_size < MIN_BOUND_GRID {
        return Err(Error::Precondition(format!("grid size {grid_size} below {MIN_BOUND_GRID}")));
    }
    let spec = DifferenceSpec::new(ell, 2)?;
    let binom = binomial_row(ell);
    let per_degree = degrees
        .iter()
        .map(|&n| {
            let mut table = vec![0.0; spec.reach(n) as usize + 1];
            let global = global_envelope(dim, n, ell);
            let mut pointwise = 0.0f64;
            let mut peak = 0.0f64;
            for i in 1..grid_size {
                let theta = PI * i as f64 / grid_size as f64;
                normalized_table_into(dim.lambda(), theta.cos(), &mut table);
                let value = difference_from_table(&table, n, spec, &binom).abs();
                let envelope = bound_envelope(dim, n, ell, theta)?;
                pointwise = pointwise.max(value / envelope);
                peak = peak.max(value);
            }
            Ok(DegreeConstant { n, pointwise, uniform: peak / global })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundConstantReport { d: dim.d(), ell, grid_size, per_degree })
}

/// Dyadic degree list lo, 2lo, 4lo, … ≤ hi.
pub fn dyadic(lo: u32, hi: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut n = lo.max(1);
    while n <= hi {
        out.push(n);
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    out
}
