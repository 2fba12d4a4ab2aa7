use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through (log n, log value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub points: Vec<(u32, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn exponent_fit(points: &[(u32, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!("exponent fit needs ≥ 3 points, got {}", points.len())));
    }
    if let Some(&(n, _)) = points.iter().find(|(n, _)| *n < 2) {
        return Err(Error::Precondition(format!("fit degrees must be ≥ 2, got {n}")));
    }
    if let Some(&(n, v)) = points.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!("value {v} at n={n} is not positive")));
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("fit degrees must not all coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if ss_tot <= f64::EPSILON * count * mean_y.abs().max(1.0).powi(2) {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(ExponentFit { points: points.to_vec(), slope, intercept, r_squared })
}
