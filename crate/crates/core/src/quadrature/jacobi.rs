//! Gauss–Jacobi nodes and weights for (1-x)^α (1+x)^β on [-1, 1].
//!
//! Nodes are roots of the orthonormal Jacobi polynomial p_N, located by
//! safeguarded Newton iteration inside certified sign-change brackets.
//! Brackets come from midpoints of Chebyshev-like angle guesses; when the
//! sign pattern of those brackets cannot be certified, brackets are rebuilt
//! from the interlacing roots of p_{N-1}, p_{N-2}, …. Each root is then
//! polished on the classical recurrence. Weights are Christoffel numbers
//! 1/Σ_{j<N} p_j(x)².

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const MAX_NEWTON: usize = 100;

/// Three-term recurrence of the orthonormal Jacobi family.
#[derive(Debug, Clone)]
pub(crate) struct JacobiRecurrence {
    /// Diagonal entries a_0..a_{N-1}.
    diag: Vec<f64>,
    /// Off-diagonal square roots √b_1..√b_N (index k holds √b_{k+1}).
    off: Vec<f64>,
    p0: f64,
}

impl JacobiRecurrence {
    pub(crate) fn new(alpha: f64, beta: f64, n: usize) -> Self {
        let ab = alpha + beta;
        let diag = (0..n)
            .map(|k| {
                if k == 0 {
                    (beta - alpha) / (ab + 2.0)
                } else {
                    let s = 2.0 * k as f64 + ab;
                    (beta * beta - alpha * alpha) / (s * (s + 2.0))
                }
            })
            .collect();
        let off = (1..=n)
            .map(|k| {
                let kf = k as f64;
                let b = if k == 1 {
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    let s = 2.0 * kf + ab;
                    4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
                };
                b.sqrt()
            })
            .collect();
        let log_mu0 =
            (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0);
        Self { diag, off, p0: (-0.5 * log_mu0).exp() }
    }

    /// (p_n(x), p_n'(x)) for n ≤ the recurrence length.
    fn eval_with_derivative(&self, n: usize, x: f64) -> (f64, f64) {
        let (mut p_prev, mut p) = (0.0, self.p0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        for k in 0..n {
            let back = if k == 0 { 0.0 } else { self.off[k - 1] };
            let p_next = ((x - self.diag[k]) * p - back * p_prev) / self.off[k];
            let d_next = ((x - self.diag[k]) * d + p - back * d_prev) / self.off[k];
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d)
    }

    fn eval(&self, n: usize, x: f64) -> f64 {
        self.eval_with_derivative(n, x).0
    }

    /// Christoffel number 1/Σ_{j<n} p_j(x)².
    fn christoffel(&self, n: usize, x: f64) -> f64 {
        let (mut p_prev, mut p) = (0.0, self.p0);
        let mut sum = p * p;
        for k in 0..n - 1 {
            let back = if k == 0 { 0.0 } else { self.off[k - 1] };
            let p_next = ((x - self.diag[k]) * p - back * p_prev) / self.off[k];
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        1.0 / sum
    }
}

/// (P_n(x), P_n'(x)) in the classical normalization. The recurrence
/// coefficients are small integer combinations of α and β, so they round
/// far less than the √b of the orthonormal form.
fn classical_with_derivative(alpha: f64, beta: f64, n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, 0.5 * (alpha - beta + (alpha + beta + 2.0) * x));
    let (mut d_prev, mut d) = (0.0, 0.5 * (alpha + beta + 2.0));
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + alpha + beta;
        let lead = 2.0 * kf * (kf + alpha + beta) * (c - 2.0);
        let slope = (c - 1.0) * c * (c - 2.0);
        let shift = (c - 1.0) * (alpha * alpha - beta * beta);
        let back = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        let p_next = ((slope * x + shift) * p - back * p_prev) / lead;
        let d_next = ((slope * x + shift) * d + slope * p - back * d_prev) / lead;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Two Newton steps on the classical P_n, kept only while |P_n| shrinks.
fn polish(alpha: f64, beta: f64, n: usize, mut x: f64) -> f64 {
    let (mut f, mut df) = classical_with_derivative(alpha, beta, n, x);
    for _ in 0..2 {
        if f == 0.0 || df == 0.0 {
            break;
        }
        let next = x - f / df;
        let (g, dg) = classical_with_derivative(alpha, beta, n, next);
        if !(g.abs() < f.abs()) {
            break;
        }
        (x, f, df) = (next, g, dg);
    }
    x
}

/// Root of p_n inside (lo, hi), where p_n changes sign.
fn bracketed_newton(rec: &JacobiRecurrence, n: usize, mut lo: f64, mut hi: f64, guess: f64) -> Result<f64> {
    let mut f_lo = rec.eval(n, lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..MAX_NEWTON {
        let (f, df) = rec.eval_with_derivative(n, x);
        if f == 0.0 {
            return Ok(x);
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        let mut next = x - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) || hi - lo <= 4.0 * f64::EPSILON {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence { degree: n, iterations: MAX_NEWTON })
}

/// Roots in increasing order, from brackets [(-1, r_1), (r_1, r_2), …, (r_{n-1}, 1)].
fn roots_from_interlacing(rec: &JacobiRecurrence, n: usize, previous: &[f64]) -> Result<Vec<f64>> {
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(-1.0);
    edges.extend_from_slice(previous);
    edges.push(1.0);
    edges.windows(2).map(|w| bracketed_newton(rec, n, w[0], w[1], 0.5 * (w[0] + w[1]))).collect()
}

/// Chebyshev-angle guesses with certified sign brackets, or `None` when the
/// sign pattern does not certify one root per bracket.
fn roots_from_guesses(rec: &JacobiRecurrence, n: usize, alpha: f64, beta: f64) -> Option<Result<Vec<f64>>> {
    let denom = n as f64 + 0.5 * (alpha + beta + 1.0);
    // θ_k for the k-th root counted from x = 1
    let angles: Vec<f64> = (1..=n).map(|k| ((k as f64 + 0.5 * alpha - 0.25) * PI / denom).clamp(0.0, PI)).collect();
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(0.0);
    for w in angles.windows(2) {
        edges.push(0.5 * (w[0] + w[1]));
    }
    edges.push(PI);
    // p_n(1) > 0 and p_n alternates sign across consecutive brackets
    for (k, theta) in edges.iter().enumerate().skip(1).take(n.saturating_sub(1)) {
        let value = rec.eval(n, theta.cos());
        let expected_negative = k % 2 == 1;
        if value == 0.0 || (value < 0.0) != expected_negative {
            return None;
        }
    }
    if edges.windows(2).any(|w| !(w[1] > w[0])) {
        return None;
    }
    let mut roots = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let lo = edges[k + 1].cos();
        let hi = edges[k].cos();
        match bracketed_newton(rec, n, lo, hi, angles[k].cos()) {
            Ok(r) => roots.push(r),
            Err(e) => return Some(Err(e)),
        }
    }
    Some(Ok(roots))
}

/// Nodes (increasing) and weights of the n-point Gauss–Jacobi rule.
pub fn gauss_jacobi(alpha: f64, beta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Precondition("rule needs at least one node".into()));
    }
    if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::Domain(format!("Jacobi exponents ({alpha}, {beta}) must exceed -1")));
    }
    let rec = JacobiRecurrence::new(alpha, beta, n);
    let nodes = match roots_from_guesses(&rec, n, alpha, beta) {
        Some(result) => result?,
        None => {
            let mut roots: Vec<f64> = Vec::new();
            for k in 1..=n {
                roots = roots_from_interlacing(&rec, k, &roots)?;
            }
            roots
        }
    };
    let nodes: Vec<f64> = nodes.into_iter().map(|x| polish(alpha, beta, n, x)).collect();
    let weights = nodes.iter().map(|&x| rec.christoffel(n, x)).collect();
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small() {
        let (x, w) = gauss_jacobi(0.0, 0.0, 2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interlacing_fallback_agrees_with_guessed_brackets() {
        let rec = JacobiRecurrence::new(1.5, 0.5, 24);
        let fast = roots_from_guesses(&rec, 24, 1.5, 0.5).unwrap().unwrap();
        let mut slow: Vec<f64> = Vec::new();
        for k in 1..=24 {
            slow = roots_from_interlacing(&rec, k, &slow).unwrap();
        }
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_moments() {
        // ∫ (1-x)^2 (1+x)^0.5 x^k dx against a fine Legendre rule on a polynomial
        let (x, w) = gauss_jacobi(2.0, 0.5, 12).unwrap();
        let mass: f64 = w.iter().sum();
        // 2^{α+β+1} Γ(α+1)Γ(β+1)/Γ(α+β+2) = 2^{3.5}·2·(√π/2)/Γ(4.5)
        let expected = 2f64.powf(3.5) * 2.0 * (PI.sqrt() / 2.0) / (3.5 * 2.5 * 1.5 * 0.5 * PI.sqrt());
        assert!(((mass - expected) / expected).abs() < 1e-13);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(gauss_jacobi(-1.0, 0.0, 3).is_err());
        assert!(gauss_jacobi(0.0, 0.0, 0).is_err());
    }
}
