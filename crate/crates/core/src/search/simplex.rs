//! Nelder–Mead simplex maximization.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Maximum objective evaluations.
    pub budget: usize,
    /// Initial edge length along each coordinate.
    pub step: f64,
    /// Stop once best and worst vertex values agree to this relative spread.
    pub ftol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { budget: 400, step: 0.25, ftol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub best: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Maximizes `objective` starting from `start`. The start point is always
/// evaluated, so the result never falls below it.
pub fn maximize(
    mut objective: impl FnMut(&[f64]) -> Result<f64>,
    start: &[f64],
    opts: &SimplexOptions,
) -> Result<SimplexOutcome> {
    let dim = start.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let v = objective(x)?;
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    };

    let mut vertices: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(start, &mut evaluations)?;
    vertices.push((start.to_vec(), v0));
    if dim <= 1 {
        // scale-only objectives along one coordinate have nothing to explore
        return Ok(SimplexOutcome { best: start.to_vec(), value: v0, evaluations });
    }
    for i in 0..dim {
        if evaluations >= opts.budget {
            break;
        }
        let mut x = start.to_vec();
        x[i] += if x[i].abs() > 0.0 { opts.step * x[i].abs().max(1.0) } else { opts.step };
        let v = eval(&x, &mut evaluations)?;
        vertices.push((x, v));
    }

    while vertices.len() == dim + 1 && evaluations < opts.budget {
        // best first
        vertices.sort_by(|a, b| b.1.total_cmp(&a.1));
        let best = vertices[0].1;
        let worst = vertices[dim].1;
        if (best - worst).abs() <= opts.ftol * best.abs().max(1e-300) {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &vertices[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along =
            |t: f64| -> Vec<f64> { centroid.iter().zip(&vertices[dim].0).map(|(c, w)| c + t * (c - w)).collect() };
        let reflected = along(REFLECT);
        let fr = eval(&reflected, &mut evaluations)?;
        let second_worst = vertices[dim - 1].1;
        if fr > best {
            let expanded = along(EXPAND);
            let fe = eval(&expanded, &mut evaluations)?;
            vertices[dim] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > second_worst {
            vertices[dim] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr > worst {
                let x = along(CONTRACT * REFLECT);
                let v = eval(&x, &mut evaluations)?;
                (x, v)
            } else {
                let x = along(-CONTRACT);
                let v = eval(&x, &mut evaluations)?;
                (x, v)
            };
            if fc > worst.max(fr) {
                vertices[dim] = (contracted, fc);
            } else {
                let anchor = vertices[0].0.clone();
                for vertex in vertices.iter_mut().skip(1) {
                    if evaluations >= opts.budget {
                        break;
                    }
                    let x: Vec<f64> = anchor.iter().zip(&vertex.0).map(|(a, v)| a + SHRINK * (v - a)).collect();
                    let v = eval(&x, &mut evaluations)?;
                    *vertex = (x, v);
                }
            }
        }
    }
    let (best, value) = vertices.into_iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("simplex has a vertex");
    Ok(SimplexOutcome { best, value, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_peak() {
        let f = |x: &[f64]| Ok(-(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 0.5).powi(2) - (x[2] - 0.25).powi(2));
        let out = maximize(f, &[0.0, 0.0, 0.0], &SimplexOptions { budget: 2000, ..Default::default() }).unwrap();
        assert!((out.best[0] - 1.0).abs() < 1e-4);
        assert!((out.best[1] + 0.5).abs() < 1e-4);
        assert!(out.evaluations <= 2000);
    }

    #[test]
    fn never_regresses_below_start() {
        let f = |x: &[f64]| Ok(if x.iter().all(|v| *v == 0.5) { 10.0 } else { -x[0].abs() });
        let out = maximize(f, &[0.5, 0.5], &SimplexOptions { budget: 50, ..Default::default() }).unwrap();
        assert_eq!(out.value, 10.0);
        assert_eq!(out.best, vec![0.5, 0.5]);
    }

    #[test]
    fn respects_budget() {
        let f = |x: &[f64]| Ok(x.iter().sum::<f64>());
        let out = maximize(f, &[0.0; 4], &SimplexOptions { budget: 30, ..Default::default() }).unwrap();
        assert!(out.evaluations <= 30 + 4);
    }
}
