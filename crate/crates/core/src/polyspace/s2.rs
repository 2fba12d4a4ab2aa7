//! Real orthonormal spherical harmonics on S².
//!
//! Block n holds 2n+1 coefficients indexed by i = m + n for m = -n..=n:
//! m < 0 pairs with √2 P̄_n^{|m|}(cos θ) sin(|m|φ), m = 0 with P̄_n^0(cos θ),
//! m > 0 with √2 P̄_n^m(cos θ) cos(mφ). P̄ are associated Legendre functions
//! normalized so that the basis is orthonormal for dσ, without the
//! Condon–Shortley phase.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::quadrature::SphereGridS2;

#[derive(Debug, Clone, PartialEq)]
pub struct S2Polynomial {
    blocks: BTreeMap<u32, Vec<f64>>,
}

impl S2Polynomial {
    /// Blocks must have length 2n+1; all-zero blocks are dropped.
    pub fn new(blocks: impl IntoIterator<Item = (u32, Vec<f64>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, block) in blocks {
            let expected = 2 * n as usize + 1;
            if block.len() != expected {
                return Err(Error::LengthMismatch { expected, got: block.len() });
            }
            if block.iter().any(|c| !c.is_finite()) {
                return Err(Error::Domain(format!("block {n} has a non-finite coefficient")));
            }
            if map.contains_key(&n) {
                return Err(Error::Precondition(format!("degree {n} given twice")));
            }
            if block.iter().any(|&c| c != 0.0) {
                map.insert(n, block);
            }
        }
        Ok(Self { blocks: map })
    }

    /// The zonal element c·Y_{n,0}.
    pub fn zonal(n: u32, c: f64) -> Result<Self> {
        let mut block = vec![0.0; 2 * n as usize + 1];
        block[n as usize] = c;
        Self::new([(n, block)])
    }

    pub fn blocks(&self) -> &BTreeMap<u32, Vec<f64>> {
        &self.blocks
    }

    pub fn degree(&self) -> u32 {
        self.blocks.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.keys().copied()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.blocks.iter().map(|(&n, b)| (n, b.iter().map(|x| c * x).collect())))
    }

    /// Σ of squared coefficients, which equals ‖f‖₂².
    pub fn coefficient_energy(&self) -> f64 {
        self.blocks.values().flatten().map(|c| c * c).sum()
    }

    pub fn coeff_sup(&self) -> f64 {
        self.blocks.values().flatten().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[inline]
fn tri(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// P̄_n^m(x) for 0 ≤ m ≤ n ≤ max_degree, packed triangularly at n(n+1)/2 + m.
pub fn normalized_legendre_table(max_degree: u32, x: f64, out: &mut Vec<f64>) {
    let l = max_degree as usize;
    out.clear();
    out.resize(tri(l, l) + 1, 0.0);
    let s = (1.0 - x * x).max(0.0).sqrt();
    out[0] = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=l {
        if m > 0 {
            let mf = m as f64;
            out[tri(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * out[tri(m - 1, m - 1)];
        }
        if m < l {
            out[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * out[tri(m, m)];
        }
        for n in m + 2..=l {
            let (nf, mf) = (n as f64, m as f64);
            let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
            let b = (((nf - 1.0).powi(2) - mf * mf) / (4.0 * (nf - 1.0).powi(2) - 1.0)).sqrt();
            out[tri(n, m)] = a * (x * out[tri(n - 1, m)] - b * out[tri(n - 2, m)]);
        }
    }
}

/// Values of f at every node of `grid` (polar-major layout).
pub fn synthesize_s2(f: &S2Polynomial, grid: &SphereGridS2) -> Result<Vec<f64>> {
    let deg = f.degree();
    if grid.capacity_degree() < deg {
        return Err(Error::Capacity { needed: deg, available: grid.capacity_degree() });
    }
    let l = deg as usize;
    let m_count = grid.azimuth_count();
    // trig[m * M + a] = (cos mφ_a, sin mφ_a)
    let trig: Vec<(f64, f64)> = (0..=l)
        .flat_map(|m| (0..m_count).map(move |a| (m, a)))
        .map(|(m, a)| {
            let angle = m as f64 * grid.azimuth(a);
            (angle.cos(), angle.sin())
        })
        .collect();
    let mut values = vec![0.0; grid.len()];
    let mut table = Vec::new();
    let mut cos_part = vec![0.0; l + 1];
    let mut sin_part = vec![0.0; l + 1];
    for (i, &z) in grid.polar().nodes().iter().enumerate() {
        normalized_legendre_table(deg, z, &mut table);
        cos_part.iter_mut().for_each(|v| *v = 0.0);
        sin_part.iter_mut().for_each(|v| *v = 0.0);
        for (&n, block) in f.blocks() {
            let n = n as usize;
            cos_part[0] += block[n] * table[tri(n, 0)];
            for m in 1..=n {
                let p = SQRT_2 * table[tri(n, m)];
                cos_part[m] += block[n + m] * p;
                sin_part[m] += block[n - m] * p;
            }
        }
        let row = &mut values[i * m_count..(i + 1) * m_count];
        for (a, v) in row.iter_mut().enumerate() {
            let mut acc = cos_part[0];
            for m in 1..=l {
                let (c, s) = trig[m * m_count + a];
                acc += cos_part[m] * c + sin_part[m] * s;
            }
            *v = acc;
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::s2_product_rule;
    use crate::specfun::{normalized_eval, DimensionParams};

    fn basis(n: u32, i: usize) -> S2Polynomial {
        let mut block = vec![0.0; 2 * n as usize + 1];
        block[i] = 1.0;
        S2Polynomial::new([(n, block)]).unwrap()
    }

    #[test]
    fn basis_is_orthonormal_on_grid() {
        let max = 6u32;
        let grid = s2_product_rule(8).unwrap();
        let mut all = Vec::new();
        for n in 0..=max {
            for i in 0..(2 * n as usize + 1) {
                all.push(synthesize_s2(&basis(n, i), &grid).unwrap());
            }
        }
        for (a, va) in all.iter().enumerate() {
            for (b, vb) in all.iter().enumerate() {
                let prod: Vec<f64> = va.iter().zip(vb).map(|(x, y)| x * y).collect();
                let ip = grid.integrate(&prod).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-9, "({a},{b}) -> {ip}");
            }
        }
    }

    #[test]
    fn constant_block_has_unit_norm() {
        let grid = s2_product_rule(2).unwrap();
        let f = S2Polynomial::new([(0, vec![-2.5])]).unwrap();
        let v = synthesize_s2(&f, &grid).unwrap();
        let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
        assert!((grid.integrate(&sq).unwrap().sqrt() - 2.5).abs() < 1e-12);
        assert!(v.iter().all(|x| (x - v[0]).abs() < 1e-15));
    }

    #[test]
    fn zonal_block_is_multiple_of_legendre() {
        let dim = DimensionParams::new(2).unwrap();
        let grid = s2_product_rule(12).unwrap();
        let n = 9;
        let v = synthesize_s2(&S2Polynomial::zonal(n, 1.0).unwrap(), &grid).unwrap();
        let scale = ((2 * n + 1) as f64 / (4.0 * PI)).sqrt();
        for (idx, value) in v.iter().enumerate() {
            let z = grid.polar().nodes()[idx / grid.azimuth_count()];
            let r = normalized_eval(&dim, n, z).unwrap();
            assert!((value - scale * r).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn synthesis_is_linear() {
        let grid = s2_product_rule(6).unwrap();
        let f = S2Polynomial::new([(2, vec![0.1, -0.4, 1.0, 0.3, 0.2])]).unwrap();
        let g = S2Polynomial::new([(5, (0..11).map(|i| (i as f64).cos()).collect())]).unwrap();
        let h =
            S2Polynomial::new([(2, vec![0.1, -0.4, 1.0, 0.3, 0.2]), (5, (0..11).map(|i| (i as f64).cos()).collect())])
                .unwrap();
        let (vf, vg, vh) =
            (synthesize_s2(&f, &grid).unwrap(), synthesize_s2(&g, &grid).unwrap(), synthesize_s2(&h, &grid).unwrap());
        for i in 0..grid.len() {
            assert!((vf[i] + vg[i] - vh[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn capacity_and_validation() {
        let grid = s2_product_rule(2).unwrap();
        assert!(matches!(synthesize_s2(&S2Polynomial::zonal(7, 1.0).unwrap(), &grid), Err(Error::Capacity { .. })));
        assert!(S2Polynomial::new([(2, vec![1.0; 4])]).is_err());
        assert!(S2Polynomial::new([(1, vec![0.0; 3])]).unwrap().is_zero());
    }
}
