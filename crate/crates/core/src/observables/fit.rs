//! Weighted least-squares power laws `y = A L^κ` in log-log coordinates.

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};

/// One measurement of a size-dependent observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub size: f64,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub amplitude: f64,
    pub amplitude_stderr: f64,
    /// `χ²/(n-2)`; NaN with two points.
    pub chi2_per_dof: f64,
    pub points_used: usize,
    pub min_size: f64,
}

/// Fits `ln y = ln A + κ ln L` with weights `(y/σ)²`.
///
/// Points with non-positive value are dropped with a warning. When every error is
/// zero the fit is unweighted and the parameter errors come from the residuals.
pub fn fit_power_law(points: &[ScalingPoint]) -> Result<PowerLawFit> {
    let kept: Vec<&ScalingPoint> = points
        .iter()
        .filter(|p| {
            let ok = p.value > 0.0 && p.size > 0.0 && p.value.is_finite();
            if !ok {
                warn!("power-law fit: dropping point at size {} with value {}", p.size, p.value);
            }
            ok
        })
        .collect();
    if kept.len() < 2 {
        return Err(Error::InsufficientData(format!("power-law fit needs two positive points, got {}", kept.len())));
    }
    let weighted = kept.iter().all(|p| p.stderr > 0.0 && p.stderr.is_finite());
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let data: Vec<(f64, f64, f64)> = kept
        .iter()
        .map(|p| {
            let w = if weighted { (p.value / p.stderr).powi(2) } else { 1.0 };
            (p.size.ln(), p.value.ln(), w)
        })
        .collect();
    for &(x, y, w) in &data {
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if det <= 0.0 {
        return Err(Error::InsufficientData("power-law fit needs two distinct sizes".into()));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let chi2: f64 = data.iter().map(|&(x, y, w)| w * (y - intercept - slope * x).powi(2)).sum();
    let dof = data.len() as f64 - 2.0;
    let chi2_per_dof = if dof > 0.0 { chi2 / dof } else { f64::NAN };
    // unweighted: scale the covariance by the residual variance
    let scale = if weighted { 1.0 } else if dof > 0.0 { chi2 / dof } else { 0.0 };
    let var_slope = scale * sw / det;
    let var_intercept = scale * sxx / det;
    let amplitude = intercept.exp();
    Ok(PowerLawFit {
        exponent: slope,
        exponent_stderr: var_slope.sqrt(),
        amplitude,
        amplitude_stderr: amplitude * var_intercept.sqrt(),
        chi2_per_dof,
        points_used: data.len(),
        min_size: kept.iter().map(|p| p.size).fold(f64::INFINITY, f64::min),
    })
}

/// Fits with successively larger lower cutoffs `L >= L_min`, while at least three
/// points remain.
pub fn cutoff_sweep(points: &[ScalingPoint]) -> Vec<PowerLawFit> {
    let mut sizes: Vec<f64> = points.iter().map(|p| p.size).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    sizes
        .iter()
        .filter_map(|&cut| {
            let sub: Vec<ScalingPoint> = points.iter().copied().filter(|p| p.size >= cut).collect();
            if sub.len() >= 3 {
                fit_power_law(&sub).ok()
            } else {
                None
            }
        })
        .collect()
}
