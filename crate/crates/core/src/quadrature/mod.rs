//! Quadrature on [-1, 1] and on spheres.
//!
//! Integrals of zonal functions reduce to one dimension:
//!
//! ```text
//! ∫_{S^d} g(x·e) dσ(x) = ω_{d-1} ∫_{-1}^{1} g(t) (1-t²)^{(d-2)/2} dt,
//! ```
//!
//! so L^p norms of zonal polynomials use Gauss–Jacobi rules with α = (d-2)/2.
//! All norms use the unnormalized surface measure (total mass ω_d).

mod jacobi;
mod sphere;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

pub use jacobi::gauss_jacobi;
pub use sphere::{s2_lp_norm, s2_product_rule, SphereGridS2};

use crate::error::{Error, Result};
use crate::polyspace::ZonalPolynomial;

/// Default relative tolerance for the adaptive (non-even p) norm.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Grid points per unit of degree for sup norms.
pub const SUP_DENSITY: usize = 16;
/// Node-count cap per piece for the adaptive norm.
pub const MAX_PIECE_NODES: usize = 1 << 10;
const FIRST_PIECE_NODES: usize = 8;

/// Symmetric Gauss–Jacobi rule for the weight (1-t²)^α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// 2N - 1.
    pub fn exactness_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Σ w_i f(t_i), summed left to right.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// `node,weight` CSV with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,weight\n");
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            out.push_str(&format!("{t},{w}\n"));
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output, checking the rule's structural invariants.
    pub fn from_csv(alpha: f64, text: &str) -> Result<Self> {
        if !(alpha >= -0.5) || !alpha.is_finite() {
            return Err(Error::Domain(format!("Jacobi exponent α={alpha} must be ≥ -0.5")));
        }
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next().map(str::trim) {
            Some("node,weight") => {}
            other => return Err(Error::Parse(format!("expected header `node,weight`, got {other:?}"))),
        }
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (i, line) in lines.enumerate() {
            let (t, w) = line.split_once(',').ok_or_else(|| Error::Parse(format!("row {i}: expected two columns")))?;
            let t: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("row {i}: bad node")))?;
            let w: f64 = w.trim().parse().map_err(|_| Error::Parse(format!("row {i}: bad weight")))?;
            if !(t > -1.0 && t < 1.0) {
                return Err(Error::Parse(format!("row {i}: node {t} outside (-1, 1)")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Parse(format!("row {i}: weight {w} not positive")));
            }
            if let Some(&last) = nodes.last() {
                if !(t > last) {
                    return Err(Error::Parse(format!("row {i}: nodes not strictly increasing")));
                }
            }
            nodes.push(t);
            weights.push(w);
        }
        if nodes.is_empty() {
            return Err(Error::Parse("rule has no nodes".into()));
        }
        Ok(Self { alpha, nodes, weights })
    }
}

/// N-point Gauss–Jacobi rule for (1-t²)^α, α ≥ -1/2.
pub fn gauss_jacobi_rule(alpha: f64, n: usize) -> Result<QuadratureRule> {
    if !(alpha >= -0.5) || !alpha.is_finite() {
        return Err(Error::Domain(format!("Jacobi exponent α={alpha} must be ≥ -0.5")));
    }
    let (mut nodes, mut weights) = gauss_jacobi(alpha, alpha, n)?;
    // enforce exact mirror symmetry
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let t = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -t;
        nodes[j] = t;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { alpha, nodes, weights })
}

type RuleKey = (u64, u64, usize);
type RuleCache = Mutex<HashMap<RuleKey, Arc<(Vec<f64>, Vec<f64>)>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized (nodes, weights); symmetric rules go through [`gauss_jacobi_rule`].
pub(crate) fn cached_rule(alpha: f64, beta: f64, n: usize) -> Result<Arc<(Vec<f64>, Vec<f64>)>> {
    let key = (alpha.to_bits(), beta.to_bits(), n);
    if let Some(rule) = rule_cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let pair = if alpha == beta && alpha >= -0.5 {
        let rule = gauss_jacobi_rule(alpha, n)?;
        (rule.nodes, rule.weights)
    } else {
        gauss_jacobi(alpha, beta, n)?
    };
    let rule = Arc::new(pair);
    rule_cache().lock().expect("rule cache poisoned").insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// ‖f‖_p for a zonal polynomial, 0 < p < ∞.
///
/// Even integer p: a Gauss–Jacobi rule exact for |g|^p = g^p, with
/// N = p·deg/2 + 1 nodes. Otherwise [0, π] ∋ θ is split at the sign changes
/// of g(cos θ); each piece is integrated with a Gauss–Jacobi rule whose
/// endpoint exponents absorb the |θ - θ_0|^p behaviour at the zeros, and the
/// per-piece node count doubles until successive norms agree to `tol`.
pub fn zonal_lp_norm(f: &ZonalPolynomial, p: f64, tol: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!("exponent p={p} must lie in (0, ∞)")));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let dim = f.dim();
    let deg = f.degree() as usize;
    if p <= 1e6 && (p / 2.0).fract() == 0.0 {
        let half = (p / 2.0) as i32;
        let n = half as usize * deg + 1;
        let rule = cached_rule(dim.jacobi_alpha(), dim.jacobi_alpha(), n)?;
        let mut scratch = f.scratch();
        let sum: f64 = rule.0.iter().zip(&rule.1).map(|(&t, &w)| w * f.eval_with(t, &mut scratch).powi(2 * half)).sum();
        return Ok((dim.omega_lower() * sum).powf(1.0 / p));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let roots = angular_sign_changes(f);
    let mut edges = Vec::with_capacity(roots.len() + 2);
    edges.push((0.0, false));
    edges.extend(roots.into_iter().map(|r| (r, true)));
    edges.push((PI, false));

    let power_sin = dim.d() as i32 - 1;
    let mut scratch = f.scratch();
    let mut previous = f64::NAN;
    let mut nodes = FIRST_PIECE_NODES;
    loop {
        let mut integral = 0.0;
        for w in edges.windows(2) {
            let ((a, a_root), (b, b_root)) = (w[0], w[1]);
            let ea = if a_root { p } else { 0.0 };
            let eb = if b_root { p } else { 0.0 };
            // Jacobi α sits at x = +1 (θ = b), β at x = -1 (θ = a)
            let rule = cached_rule(eb, ea, nodes)?;
            let half = 0.5 * (b - a);
            let mut piece = 0.0;
            for (&x, &wt) in rule.0.iter().zip(&rule.1) {
                let from_a = half * (1.0 + x);
                let to_b = half * (1.0 - x);
                let theta = a + from_a;
                let value = f.eval_with(theta.cos(), &mut scratch).abs();
                let mut g = value.powf(p) * theta.sin().powi(power_sin);
                if a_root {
                    g /= from_a.powf(p);
                }
                if b_root {
                    g /= to_b.powf(p);
                }
                piece += wt * g;
            }
            integral += half.powf(1.0 + ea + eb) * piece;
        }
        let norm = (dim.omega_lower() * integral).powf(1.0 / p);
        if (norm - previous).abs() <= tol * norm {
            return Ok(norm);
        }
        if nodes >= MAX_PIECE_NODES {
            return Err(Error::NonConvergence { nodes, last: norm, previous });
        }
        previous = norm;
        nodes *= 2;
    }
}

/// Interior zeros of θ ↦ g(cos θ) on (0, π) where g changes sign.
fn angular_sign_changes(f: &ZonalPolynomial) -> Vec<f64> {
    let samples = (SUP_DENSITY * f.degree() as usize).max(64);
    let mut scratch = f.scratch();
    let mut h = |theta: f64| f.eval_with(theta.cos(), &mut scratch);
    let step = PI / samples as f64;
    let mut roots = Vec::new();
    let mut before = f64::NAN;
    let mut prev = h(0.0);
    for i in 1..=samples {
        let theta = i as f64 * step;
        let value = h(theta);
        if value == 0.0 && i < samples {
            roots.push(theta);
        } else if prev != 0.0 && value != 0.0 && (prev < 0.0) != (value < 0.0) {
            roots.push(illinois(&mut h, theta - step, prev, theta, value));
        } else if i >= 2
            && prev != 0.0
            && (before < 0.0) == (prev < 0.0)
            && (value < 0.0) == (prev < 0.0)
            && prev.abs() < before.abs()
            && prev.abs() <= value.abs()
        {
            // a dip towards zero may hide two roots between samples
            let (lo, hi) = (theta - 2.0 * step, theta);
            let sign = prev.signum();
            let (mid, at_mid) = golden_min(&mut |t| sign * h(t), lo, hi);
            if at_mid < 0.0 {
                roots.push(illinois(&mut h, lo, before, mid, sign * at_mid));
                roots.push(illinois(&mut h, mid, sign * at_mid, hi, value));
            }
        }
        before = prev;
        prev = value;
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Golden-section minimum of a unimodal function on [a, b].
fn golden_min(h: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (h(c), h(d));
    while b - a > 4.0 * f64::EPSILON * b.abs().max(1.0) {
        if fc < 0.0 {
            return (c, fc);
        }
        if fd < 0.0 {
            return (d, fd);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = h(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Regula falsi with the Illinois modification on a sign-change bracket.
fn illinois(h: &mut impl FnMut(f64) -> f64, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) || (b - a) <= 4.0 * f64::EPSILON * b.abs() {
            // the secant step has stalled on an endpoint; keep the better one
            return if h(a).abs() <= h(b).abs() { a } else { b };
        }
        let fc = h(c);
        if fc == 0.0 {
            return c;
        }
        if (fc < 0.0) == (fb < 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    if h(a).abs() <= h(b).abs() {
        a
    } else {
        b
    }
}

/// sup_{t∈[-1,1]} |g(t)| from a uniform t-grid plus one parabolic step at the argmax.
///
/// The grid has max(grid_size, 16·deg, 16) intervals. The result is a lower
/// bound for the true supremum.
pub fn zonal_sup_norm(f: &ZonalPolynomial, grid_size: usize) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let intervals = grid_size.max(SUP_DENSITY * f.degree() as usize).max(SUP_DENSITY);
    let mut scratch = f.scratch();
    let h = 2.0 / intervals as f64;
    let at = |i: usize| if i == intervals { 1.0 } else { -1.0 + i as f64 * h };
    let mut best = (0usize, -1.0f64);
    for i in 0..=intervals {
        let v = f.eval_with(at(i), &mut scratch).abs();
        if v > best.1 {
            best = (i, v);
        }
    }
    let (i, y1) = best;
    if i == 0 || i == intervals {
        return y1;
    }
    let y0 = f.eval_with(at(i - 1), &mut scratch).abs();
    let y2 = f.eval_with(at(i + 1), &mut scratch).abs();
    let curvature = y0 - 2.0 * y1 + y2;
    if !(curvature < 0.0) {
        return y1;
    }
    let t = (at(i) + 0.5 * h * (y0 - y2) / curvature).clamp(at(i - 1), at(i + 1));
    y1.max(f.eval_with(t, &mut scratch).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gegenbauer_at_one, DimensionParams};

    /// ∫_{-1}^{1} t^{2j} (1-t²)^α dt by the Beta-ratio recurrence, starting from the mass.
    fn even_moments(mass: f64, alpha: f64, max_k: usize) -> Vec<f64> {
        let mut out = vec![mass];
        let mut j = 1;
        while 2 * j <= max_k {
            let prev = out[j - 1];
            out.push(prev * (2.0 * j as f64 - 1.0) / (2.0 * j as f64 + 2.0 * alpha + 1.0));
            j += 1;
        }
        out
    }

    #[test]
    fn rule_examples() {
        let r = gauss_jacobi_rule(0.0, 1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-14);
        let r = gauss_jacobi_rule(0.5, 3).unwrap();
        assert!((r.total_weight() - PI / 2.0).abs() < 1e-14);
        let r = gauss_jacobi_rule(0.0, 2).unwrap();
        assert_eq!(r.exactness_degree(), 3);
        assert!((r.integrate(|t| t * t) - 2.0 / 3.0).abs() < 1e-15);
        assert!(gauss_jacobi_rule(-0.7, 4).is_err());
    }

    #[test]
    fn moments_exact_for_moderate_rules() {
        for (alpha, mass) in [(0.0, 2.0), (0.5, PI / 2.0), (1.0, 4.0 / 3.0), (1.5, 3.0 * PI / 8.0)] {
            for n in [1usize, 2, 3, 7, 16, 33, 64] {
                let rule = gauss_jacobi_rule(alpha, n).unwrap();
                let moments = even_moments(mass, alpha, rule.exactness_degree());
                for k in 0..=rule.exactness_degree() {
                    let got = rule.integrate(|t| t.powi(k as i32));
                    if k % 2 == 1 {
                        assert!(got.abs() <= 1e-14 * mass, "α={alpha} N={n} k={k}");
                    } else {
                        let want = moments[k / 2];
                        assert!(((got - want) / want).abs() < 1e-12, "α={alpha} N={n} k={k}: {got} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let rule = gauss_jacobi_rule(0.5, 9).unwrap();
        let back = QuadratureRule::from_csv(0.5, &rule.to_csv()).unwrap();
        assert_eq!(rule, back);
        assert!(QuadratureRule::from_csv(0.5, "node,weight\n0.5,1\n0.1,1\n").is_err());
        assert!(QuadratureRule::from_csv(0.5, "nodes\n").is_err());
        assert!(QuadratureRule::from_csv(0.5, "node,weight\n0.5,-1\n").is_err());
        assert!(QuadratureRule::from_csv(0.5, "node,weight\n").is_err());
    }

    fn dim(d: u32) -> DimensionParams {
        DimensionParams::new(d).unwrap()
    }

    #[test]
    fn zonal_norm_examples() {
        let one = ZonalPolynomial::single(dim(2), 0, 1.0).unwrap();
        for p in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let got = zonal_lp_norm(&one, p, DEFAULT_TOL).unwrap();
            let want = (4.0 * PI).powf(1.0 / p);
            assert!(((got - want) / want).abs() < 1e-12, "p={p}");
        }
        let r3 = ZonalPolynomial::single(dim(2), 3, 1.0).unwrap();
        let want = (4.0 * PI / 7.0).sqrt();
        assert!((zonal_lp_norm(&r3, 2.0, DEFAULT_TOL).unwrap() - want).abs() < 1e-13);
        let r1 = ZonalPolynomial::single(dim(2), 1, 1.0).unwrap();
        let want = (4.0 * PI / 3.0).sqrt();
        assert!((zonal_lp_norm(&r1, 2.0, DEFAULT_TOL).unwrap() - want).abs() < 1e-13);
        assert!(zonal_lp_norm(&r1, 0.0, DEFAULT_TOL).is_err());
    }

    #[test]
    fn adaptive_route_matches_exact_route_on_even_p() {
        // the splitting route must reproduce exact even-p values when forced
        let f = ZonalPolynomial::new(dim(3), [(0, 0.3), (3, -1.0), (9, 0.7), (14, 0.2)]).unwrap();
        let exact = zonal_lp_norm(&f, 2.0, DEFAULT_TOL).unwrap();
        let near = zonal_lp_norm(&f, 2.0 + 1e-9, 1e-12).unwrap();
        assert!(((exact - near) / exact).abs() < 1e-8);
    }

    #[test]
    fn l1_norm_of_legendre_p1() {
        // ‖t‖_1 on S² = 2π ∫|t| dt = 2π
        let f = ZonalPolynomial::single(dim(2), 1, 1.0).unwrap();
        assert!((zonal_lp_norm(&f, 1.0, 1e-12).unwrap() - 2.0 * PI).abs() < 1e-11);
        // ‖t‖_{1/2}: 2π ∫|t|^{1/2} dt = 2π·4/3, then squared
        let got = zonal_lp_norm(&f, 0.5, 1e-12).unwrap();
        let want = (2.0 * PI * 4.0 / 3.0f64).powi(2);
        assert!(((got - want) / want).abs() < 1e-10);
    }

    #[test]
    fn l1_norm_with_close_root_pair() {
        // (t - c)² - e² with both roots inside one sampling step
        let (c, e) = (0.03, 1e-3);
        let f = ZonalPolynomial::new(dim(2), [(0, 1.0 / 3.0 + c * c - e * e), (1, -2.0 * c), (2, 2.0 / 3.0)]).unwrap();
        let signed = ((1.0 - c).powi(3) + (1.0 + c).powi(3)) / 3.0 - 2.0 * e * e;
        let want = 2.0 * PI * (signed + 8.0 * e.powi(3) / 3.0);
        let got = zonal_lp_norm(&f, 1.0, 1e-12).unwrap();
        assert!(((got - want) / want).abs() < 1e-11, "{got} vs {want}");
    }

    #[test]
    fn l2_oracle_small() {
        for d in 2..=5 {
            let dm = dim(d);
            for n in [0u32, 1, 5, 30] {
                let f = ZonalPolynomial::single(dm, n, 1.0).unwrap();
                let got = zonal_lp_norm(&f, 2.0, DEFAULT_TOL).unwrap().powi(2);
                let lambda = dm.lambda();
                let want = dm.omega() * lambda / ((n as f64 + lambda) * gegenbauer_at_one(lambda, n).unwrap());
                assert!(((got - want) / want).abs() < 1e-10, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn sup_norm_examples() {
        for d in [2, 3, 5] {
            let f = ZonalPolynomial::single(dim(d), 9, 1.0).unwrap();
            assert!((zonal_sup_norm(&f, 0) - 1.0).abs() < 1e-14);
        }
        let c = ZonalPolynomial::single(dim(3), 0, -2.5).unwrap();
        assert_eq!(zonal_sup_norm(&c, 16), 2.5);
        let f = ZonalPolynomial::new(dim(2), [(0, 1.0), (2, -1.0)]).unwrap();
        assert!((zonal_sup_norm(&f, 32) - 1.5).abs() < 1e-12);
        assert_eq!(zonal_sup_norm(&ZonalPolynomial::zero(dim(2)), 16), 0.0);
    }

    #[test]
    fn holder_consistency() {
        let f = ZonalPolynomial::new(dim(3), [(1, 1.0), (4, -0.5), (10, 2.0)]).unwrap();
        let omega = dim(3).omega();
        let ps = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
        for (i, &p) in ps.iter().enumerate() {
            for &q in &ps[i + 1..] {
                let np = zonal_lp_norm(&f, p, DEFAULT_TOL).unwrap();
                let nq = zonal_lp_norm(&f, q, DEFAULT_TOL).unwrap();
                assert!(np <= nq * omega.powf(1.0 / p - 1.0 / q) * (1.0 + 1e-10), "p={p} q={q}");
            }
        }
    }
}
