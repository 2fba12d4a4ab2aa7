use serde::{Deserialize, Serialize};

use crate::exponent::Exponent;

/// Reasons a bound is reported outside the regime where it is proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisWarning {
    /// (p, q) satisfies neither 0 < p ≤ 1, p ≤ q nor 1 ≤ p ≤ 2, p ≤ q ≤ p′.
    ExponentPair,
    /// m > n/ℓ.
    TooManyTerms,
}

/// Constant-free bounds on ‖f‖_q/‖f‖_p for f in the lacunary class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    /// (n^{d-1-ℓ₀} m)^{1/p-1/q}
    pub theorem: f64,
    /// n^{(d-ℓ₀)(1/p-1/q)}
    pub coarse: f64,
    /// n^{d(1/p-1/q)}
    pub classical: f64,
    pub ell0: f64,
    pub warnings: Vec<HypothesisWarning>,
}

fn hypotheses_hold(p: Exponent, q: Exponent) -> bool {
    let first = p.value() <= 1.0 && p <= q;
    let second = (1.0..=2.0).contains(&p.value()) && p <= q && p.conjugate().map(|pc| q <= pc).unwrap_or(false);
    first || second
}

/// The three bounds at (d, n, m, ℓ, p, q), without their constants.
///
/// The m-factor uses max(m, 1), so a single harmonic (m = 0) is bounded like
/// the one-term class. Degree n = 0 is treated as n = 1.
pub fn theorem_bound(d: u32, n: u32, m: u32, ell: u32, p: Exponent, q: Exponent) -> BoundSet {
    let lambda = (d as f64 - 1.0) / 2.0;
    let ell0 = (ell as f64).min(lambda);
    let gap = p.reciprocal() - q.reciprocal();
    let nf = n.max(1) as f64;
    let mf = m.max(1) as f64;
    let mut warnings = Vec::new();
    if !hypotheses_hold(p, q) {
        warnings.push(HypothesisWarning::ExponentPair);
    }
    if m as u64 * ell as u64 > n as u64 {
        warnings.push(HypothesisWarning::TooManyTerms);
    }
    BoundSet {
        theorem: (nf.powf(d as f64 - 1.0 - ell0) * mf).powf(gap),
        coarse: nf.powf((d as f64 - ell0) * gap),
        classical: nf.powf(d as f64 * gap),
        ell0,
        warnings,
    }
}

/// A measured Nikolskii ratio next to the bounds it is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NikolskiiReport {
    pub p: Exponent,
    pub q: Exponent,
    /// p′ when p ≥ 1.
    pub p_conj: Option<Exponent>,
    pub d: u32,
    pub n: u32,
    pub m: u32,
    pub ell: u32,
    pub ell0: f64,
    pub ratio: f64,
    pub theorem_bound: f64,
    pub coarse_bound: f64,
    pub classical_bound: f64,
    pub warnings: Vec<HypothesisWarning>,
}

impl NikolskiiReport {
    pub fn new(d: u32, n: u32, m: u32, ell: u32, p: Exponent, q: Exponent, ratio: f64) -> Self {
        let bounds = theorem_bound(d, n, m, ell, p, q);
        Self {
            p,
            q,
            p_conj: p.conjugate().ok(),
            d,
            n,
            m,
            ell,
            ell0: bounds.ell0,
            ratio,
            theorem_bound: bounds.theorem,
            coarse_bound: bounds.coarse,
            classical_bound: bounds.classical,
            warnings: bounds.warnings,
        }
    }

    pub fn ratio_over_bound(&self) -> f64 {
        self.ratio / self.theorem_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: Exponent = Exponent::Finite(1.0);
    const INF: Exponent = Exponent::Infinite;

    #[test]
    fn examples() {
        let b = theorem_bound(3, 16, 2, 1, ONE, INF);
        assert_eq!(b.theorem, 32.0);
        assert!(b.warnings.is_empty());
        let b = theorem_bound(2, 100, 1, 1, ONE, INF);
        assert!((b.theorem - 10.0).abs() < 1e-12);
        assert_eq!(b.ell0, 0.5);
        let p = Exponent::Finite(1.5);
        let b = theorem_bound(4, 64, 3, 2, p, p);
        assert_eq!((b.theorem, b.coarse, b.classical), (1.0, 1.0, 1.0));
    }

    #[test]
    fn hypothesis_warnings() {
        assert!(theorem_bound(3, 16, 1, 1, Exponent::Finite(0.5), Exponent::Finite(7.0)).warnings.is_empty());
        assert!(theorem_bound(3, 16, 1, 1, Exponent::Finite(1.5), Exponent::Finite(3.0)).warnings.is_empty());
        assert_eq!(
            theorem_bound(3, 16, 1, 1, Exponent::Finite(1.5), Exponent::Finite(4.0)).warnings,
            vec![HypothesisWarning::ExponentPair]
        );
        assert_eq!(
            theorem_bound(3, 16, 1, 1, Exponent::Finite(3.0), INF).warnings,
            vec![HypothesisWarning::ExponentPair]
        );
        assert_eq!(theorem_bound(3, 4, 5, 1, ONE, INF).warnings, vec![HypothesisWarning::TooManyTerms]);
    }

    #[test]
    fn ordering_of_bounds() {
        for d in 2..6 {
            for ell in 1..4 {
                for n in [3u32, 10, 64, 500] {
                    for m in 1..=n / ell {
                        let b = theorem_bound(d, n, m, ell, Exponent::Finite(1.0), Exponent::Finite(2.0));
                        assert!(b.theorem <= b.coarse * (1.0 + 1e-12));
                        assert!(b.classical >= b.coarse);
                    }
                }
            }
        }
    }

    #[test]
    fn report_carries_conjugate() {
        let r = NikolskiiReport::new(2, 100, 0, 1, ONE, INF, 5.0);
        assert_eq!(r.p_conj, Some(INF));
        assert!((r.ratio_over_bound() - 0.5).abs() < 1e-12);
        let r = NikolskiiReport::new(2, 100, 0, 1, Exponent::Finite(0.5), INF, 5.0);
        assert_eq!(r.p_conj, None);
    }
}
