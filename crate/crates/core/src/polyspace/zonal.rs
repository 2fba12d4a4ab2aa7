use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::specfun::{normalized_table_into, DimensionParams};

/// f(x) = Σ_k a_k R_k(x·e) for a fixed pole e on S^d.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonalPolynomial {
    dim: DimensionParams,
    coeffs: BTreeMap<u32, f64>,
}

impl ZonalPolynomial {
    /// Builds from (degree, coefficient) pairs; repeated degrees accumulate and
    /// exact zeros are dropped.
    pub fn new(dim: DimensionParams, terms: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, a) in terms {
            if !a.is_finite() {
                return Err(Error::Domain(format!("coefficient at degree {k} is not finite")));
            }
            *coeffs.entry(k).or_insert(0.0) += a;
        }
        coeffs.retain(|_, a| *a != 0.0);
        Ok(Self { dim, coeffs })
    }

    /// a·R_n.
    pub fn single(dim: DimensionParams, n: u32, a: f64) -> Result<Self> {
        Self::new(dim, [(n, a)])
    }

    pub fn zero(dim: DimensionParams) -> Self {
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn dim(&self) -> &DimensionParams {
        &self.dim
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, f64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: u32) -> f64 {
        self.coeffs.get(&k).copied().unwrap_or(0.0)
    }

    /// Largest degree in the support, 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.dim, self.coeffs.iter().map(|(&k, &a)| (k, c * a)))
    }

    /// Max |a_k|.
    pub fn coeff_sup(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// g(t) = Σ a_k R_k(t) for t in [-1, 1].
    pub fn eval(&self, t: f64) -> f64 {
        let mut scratch = vec![0.0; self.degree() as usize + 1];
        self.eval_with(t, &mut scratch)
    }

    /// [`eval`](Self::eval) reusing a scratch buffer of length ≥ degree+1.
    pub fn eval_with(&self, t: f64, scratch: &mut [f64]) -> f64 {
        let len = self.degree() as usize + 1;
        let table = &mut scratch[..len];
        normalized_table_into(self.dim.lambda(), t.clamp(-1.0, 1.0), table);
        self.coeffs.iter().map(|(&k, &a)| a * table[k as usize]).sum()
    }

    pub fn scratch(&self) -> Vec<f64> {
        vec![0.0; self.degree() as usize + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_zeros_and_tracks_degree() {
        let dim = DimensionParams::new(3).unwrap();
        let f = ZonalPolynomial::new(dim, [(4, 0.0), (2, 1.5), (7, -1.0), (7, 1.0)]).unwrap();
        assert_eq!(f.coeffs().len(), 1);
        assert_eq!(f.degree(), 2);
        assert!(ZonalPolynomial::zero(dim).is_zero());
        assert!(ZonalPolynomial::new(dim, [(1, f64::NAN)]).is_err());
    }

    #[test]
    fn legendre_values() {
        let dim = DimensionParams::new(2).unwrap();
        let f = ZonalPolynomial::new(dim, [(0, 1.0), (2, -1.0)]).unwrap();
        assert!((f.eval(0.0) - 1.5).abs() < 1e-15);
        assert!(f.eval(1.0).abs() < 1e-15);
    }
}
