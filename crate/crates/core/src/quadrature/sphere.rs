use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

use super::{gauss_jacobi_rule, QuadratureRule};

/// Product rule on S²: Gauss–Legendre in cos θ times equispaced azimuths.
///
/// Values over the grid are laid out polar-major: index `i * M + a` holds the
/// node (θ_i, φ_a) with φ_a = 2πa/M.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGridS2 {
    polar: QuadratureRule,
    azimuths: usize,
    weights: Vec<f64>,
}

impl SphereGridS2 {
    /// L polar nodes, M ≥ 3 azimuths.
    pub fn new(polar_nodes: usize, azimuths: usize) -> Result<Self> {
        if azimuths < 3 {
            return Err(Error::Precondition(format!("azimuth count {azimuths} below 3")));
        }
        let polar = gauss_jacobi_rule(0.0, polar_nodes)?;
        let step = 2.0 * PI / azimuths as f64;
        let weights = polar.weights().iter().flat_map(|&w| std::iter::repeat_n(w * step, azimuths)).collect();
        Ok(Self { polar, azimuths, weights })
    }

    /// Smallest grid integrating every spherical polynomial of degree ≤ `degree`.
    pub fn with_capacity(degree: u32) -> Result<Self> {
        let degree = degree as usize;
        Self::new(degree / 2 + 1, degree + 1)
    }

    pub fn polar(&self) -> &QuadratureRule {
        &self.polar
    }

    pub fn polar_count(&self) -> usize {
        self.polar.len()
    }

    pub fn azimuth_count(&self) -> usize {
        self.azimuths
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn azimuth(&self, a: usize) -> f64 {
        2.0 * PI * a as f64 / self.azimuths as f64
    }

    /// Exactness degree min(2L - 1, M - 1).
    pub fn capacity_degree(&self) -> u32 {
        self.polar.exactness_degree().min(self.azimuths - 1) as u32
    }

    /// Cartesian coordinates of node `index`.
    pub fn point(&self, index: usize) -> [f64; 3] {
        let (i, a) = (index / self.azimuths, index % self.azimuths);
        let z = self.polar.nodes()[i];
        let s = (1.0 - z * z).sqrt();
        let phi = self.azimuth(a);
        [s * phi.cos(), s * phi.sin(), z]
    }

    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values)?;
        Ok(self.weights.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    pub(crate) fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: values.len() });
        }
        Ok(())
    }
}

/// L-point Gauss–Legendre in cos θ crossed with M = 2L + 1 azimuths.
pub fn s2_product_rule(polar_nodes: usize) -> Result<SphereGridS2> {
    SphereGridS2::new(polar_nodes, 2 * polar_nodes + 1)
}

/// (Σ w_i |v_i|^p)^{1/p}, or max |v_i| for p = ∞.
pub fn s2_lp_norm(values: &[f64], grid: &SphereGridS2, p: Exponent) -> Result<f64> {
    grid.check_len(values)?;
    match p {
        Exponent::Infinite => Ok(values.iter().fold(0.0, |m, v| m.max(v.abs()))),
        Exponent::Finite(p) => {
            let sum: f64 = match p {
                2.0 => grid.weights.iter().zip(values).map(|(w, v)| w * v * v).sum(),
                _ => grid.weights.iter().zip(values).map(|(w, v)| w * v.abs().powf(p)).sum(),
            };
            Ok(sum.powf(1.0 / p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_weight_is_four_pi() {
        for l in [1, 2, 5, 16] {
            let grid = s2_product_rule(l).unwrap();
            let total: f64 = grid.weights().iter().sum();
            assert!(((total - 4.0 * PI) / (4.0 * PI)).abs() < 1e-12);
            assert_eq!(grid.len(), l * (2 * l + 1));
        }
        assert!(SphereGridS2::new(4, 2).is_err());
    }

    #[test]
    fn odd_monomial_vanishes() {
        let grid = s2_product_rule(4).unwrap();
        let values: Vec<f64> = (0..grid.len()).map(|i| grid.point(i)).map(|[x, y, z]| x * y * z).collect();
        assert!(grid.integrate(&values).unwrap().abs() < 1e-14);
    }

    #[test]
    fn monomials_integrate_exactly() {
        // ∫ x^2 y^2 z^2 dσ = 4π/105, ∫ x^4 = 4π/5
        let grid = s2_product_rule(4).unwrap();
        let pts: Vec<[f64; 3]> = (0..grid.len()).map(|i| grid.point(i)).collect();
        let v: Vec<f64> = pts.iter().map(|[x, y, z]| (x * y * z).powi(2)).collect();
        assert!((grid.integrate(&v).unwrap() - 4.0 * PI / 105.0).abs() < 1e-14);
        let v: Vec<f64> = pts.iter().map(|[x, _, _]| x.powi(4)).collect();
        assert!((grid.integrate(&v).unwrap() - 4.0 * PI / 5.0).abs() < 1e-14);
    }

    #[test]
    fn norm_examples() {
        let grid = s2_product_rule(3).unwrap();
        let v = vec![-2.0; grid.len()];
        assert!((s2_lp_norm(&v, &grid, Exponent::Finite(1.0)).unwrap() - 8.0 * PI).abs() < 1e-12);
        let mut v: Vec<f64> = (0..grid.len()).map(|i| (i as f64).sin()).collect();
        v[5] = -3.0;
        assert_eq!(s2_lp_norm(&v, &grid, Exponent::Infinite).unwrap(), 3.0);
        assert!(matches!(s2_lp_norm(&v[1..], &grid, Exponent::Finite(2.0)), Err(Error::LengthMismatch { .. })));
    }
}
