use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{S2Polynomial, ZonalPolynomial};
use crate::error::{Error, Result};
use crate::specfun::DimensionParams;

/// Degrees n_0 < … < n_m with n_j - n_{j-1} ≥ 2ℓ + 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct LacunarySpectrum {
    ell: u32,
    degrees: Vec<u32>,
}

#[derive(Deserialize)]
struct RawSpectrum {
    ell: u32,
    degrees: Vec<u32>,
}

impl TryFrom<RawSpectrum> for LacunarySpectrum {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        validate_spectrum(&raw.degrees, raw.ell)
    }
}

/// Checks the gap condition, reporting the first offending index.
pub fn validate_spectrum(degrees: &[u32], ell: u32) -> Result<LacunarySpectrum> {
    if degrees.is_empty() {
        return Err(Error::Precondition("spectrum is empty".into()));
    }
    if ell == 0 {
        return Err(Error::Precondition("gap parameter ℓ must be positive".into()));
    }
    let required = 2 * ell + 1;
    for (j, w) in degrees.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NonMonotone { index: j + 1 });
        }
        let gap = w[1] - w[0];
        if gap < required {
            return Err(Error::GapViolation { index: j + 1, gap, required });
        }
    }
    Ok(LacunarySpectrum { ell, degrees: degrees.to_vec() })
}

impl LacunarySpectrum {
    /// m + 1 equally spaced degrees ending at n with gap 2ℓ + 1.
    pub fn packed(n: u32, m: u32, ell: u32) -> Result<Self> {
        let gap = 2 * ell + 1;
        let span = m.checked_mul(gap).filter(|&s| s <= n).ok_or_else(|| {
            Error::Precondition(format!("{} terms with gap {gap} do not fit below degree {n}", m + 1))
        })?;
        validate_spectrum(&(0..=m).map(|j| n - span + j * gap).collect::<Vec<_>>(), ell)
    }

    /// The densest packing: m = ⌊n/(2ℓ+1)⌋.
    pub fn max_packed(n: u32, ell: u32) -> Result<Self> {
        Self::packed(n, n / (2 * ell + 1), ell)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of terms minus one.
    pub fn m(&self) -> u32 {
        self.degrees.len() as u32 - 1
    }

    /// n = n_m, the top degree.
    pub fn top(&self) -> u32 {
        *self.degrees.last().expect("spectrum is nonempty")
    }

    pub fn contains(&self, degree: u32) -> bool {
        self.degrees.binary_search(&degree).is_ok()
    }

    /// The standing assumption m ≤ n/ℓ.
    pub fn within_standing_assumption(&self) -> bool {
        self.m() as u64 * self.ell as u64 <= self.top() as u64
    }
}

/// How coefficients on the spectrum degrees are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientDistribution {
    /// Independent ±1.
    Signs,
    /// Independent standard normals.
    Gaussian,
    /// One coefficient per spectrum degree, in order.
    Given(Vec<f64>),
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Σ_j a_j R_{n_j} with coefficients from `distribution`.
pub fn random_lacunary_zonal(
    spectrum: &LacunarySpectrum,
    dim: DimensionParams,
    seed: u64,
    distribution: &CoefficientDistribution,
) -> Result<ZonalPolynomial> {
    let mut rng = rng(seed);
    let coeffs: Vec<f64> = match distribution {
        CoefficientDistribution::Signs => {
            spectrum.degrees().iter().map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
        }
        CoefficientDistribution::Gaussian => {
            spectrum.degrees().iter().map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
        }
        CoefficientDistribution::Given(values) => {
            if values.len() != spectrum.degrees().len() {
                return Err(Error::LengthMismatch { expected: spectrum.degrees().len(), got: values.len() });
            }
            values.clone()
        }
    };
    ZonalPolynomial::new(dim, spectrum.degrees().iter().copied().zip(coeffs))
}

/// Isotropic Gaussian blocks of length 2n_j + 1 on S².
pub fn random_lacunary_s2(spectrum: &LacunarySpectrum, seed: u64) -> Result<S2Polynomial> {
    let mut rng = rng(seed);
    let blocks = spectrum
        .degrees()
        .iter()
        .map(|&n| (n, (0..2 * n + 1).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()))
        .collect::<Vec<(u32, Vec<f64>)>>();
    S2Polynomial::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        let s = validate_spectrum(&[0, 3, 6], 1).unwrap();
        assert_eq!((s.m(), s.top()), (2, 6));
        assert_eq!(validate_spectrum(&[0, 2, 4], 1), Err(Error::GapViolation { index: 1, gap: 2, required: 3 }));
        let s = validate_spectrum(&[5], 10).unwrap();
        assert_eq!(s.m(), 0);
        assert_eq!(validate_spectrum(&[4, 4], 1), Err(Error::NonMonotone { index: 1 }));
        assert_eq!(validate_spectrum(&[9, 2], 1), Err(Error::NonMonotone { index: 1 }));
        assert!(validate_spectrum(&[], 1).is_err());
        assert!(validate_spectrum(&[1], 0).is_err());
    }

    #[test]
    fn packing() {
        let s = LacunarySpectrum::max_packed(16, 1).unwrap();
        assert_eq!(s.degrees(), &[1, 4, 7, 10, 13, 16]);
        let s = LacunarySpectrum::packed(20, 2, 2).unwrap();
        assert_eq!(s.degrees(), &[10, 15, 20]);
        assert!(LacunarySpectrum::packed(5, 2, 1).is_err());
        assert!(s.within_standing_assumption());
    }

    #[test]
    fn serde_validates() {
        let s: LacunarySpectrum = serde_json::from_str(r#"{"ell":1,"degrees":[0,3,6]}"#).unwrap();
        assert_eq!(s.m(), 2);
        assert!(serde_json::from_str::<LacunarySpectrum>(r#"{"ell":1,"degrees":[0,1]}"#).is_err());
    }

    #[test]
    fn zonal_sampling() {
        let dim = DimensionParams::new(3).unwrap();
        let s = validate_spectrum(&[5], 1).unwrap();
        let f = random_lacunary_zonal(&s, dim, 11, &CoefficientDistribution::Signs).unwrap();
        assert_eq!(f.coeff(5).abs(), 1.0);
        assert_eq!(f.coeffs().len(), 1);

        let s = validate_spectrum(&[0, 3, 6], 1).unwrap();
        let f = random_lacunary_zonal(&s, dim, 0, &CoefficientDistribution::Given(vec![1.0, 1.0, 1.0])).unwrap();
        assert_eq!(f.coeffs().iter().map(|(&k, &a)| (k, a)).collect::<Vec<_>>(), vec![(0, 1.0), (3, 1.0), (6, 1.0)]);
        assert!(random_lacunary_zonal(&s, dim, 0, &CoefficientDistribution::Given(vec![1.0])).is_err());

        let a = random_lacunary_zonal(&s, dim, 42, &CoefficientDistribution::Gaussian).unwrap();
        let b = random_lacunary_zonal(&s, dim, 42, &CoefficientDistribution::Gaussian).unwrap();
        assert_eq!(a, b);
        let c = random_lacunary_zonal(&s, dim, 43, &CoefficientDistribution::Gaussian).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn s2_sampling() {
        let s = validate_spectrum(&[3], 1).unwrap();
        let f = random_lacunary_s2(&s, 9).unwrap();
        assert_eq!(f.blocks()[&3].len(), 7);
        let s = validate_spectrum(&[0], 1).unwrap();
        let f = random_lacunary_s2(&s, 9).unwrap();
        assert_eq!(f.degree(), 0);
        let s = validate_spectrum(&[1, 4, 9], 1).unwrap();
        assert_eq!(random_lacunary_s2(&s, 5).unwrap(), random_lacunary_s2(&s, 5).unwrap());
    }
}
