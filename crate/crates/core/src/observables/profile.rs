//! Rescaled radial profiles `ξ ↦ ‖z‖^{d-2} g̃(z)` of a two-point histogram.

use serde::{Deserialize, Serialize};

use super::two_point::TwoPointHistogram;
use crate::error::{Error, Result};
use crate::lattice::unit_vector;

/// Which displacements contribute to a profile point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ProfileMode {
    /// `z = k e_axis` for `k >= 1`.
    OnAxis { axis: usize },
    /// Average over the `2d` points `±k e_j`.
    AxisAverage,
    /// Average over all lattice points with `‖z‖` in `[r, r + width)`, unobserved
    /// points included.
    Shells { width: f64 },
}

impl Default for ProfileMode {
    fn default() -> Self {
        ProfileMode::OnAxis { axis: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    /// `‖z‖ / L^{d/4}` (mean norm of the shell in shell mode).
    pub xi: f64,
    pub norm: f64,
    /// Average `g̃` over the contributing displacements.
    pub two_point: f64,
    /// `‖z‖^{d-2}` times the average `g̃`.
    pub scaled: f64,
    pub scaled_stderr: f64,
    /// Number of lattice points averaged.
    pub points: u64,
}

/// `ξ = ‖z‖ / L^{d/4}`.
pub fn xi_of(norm: f64, d: usize, period: u32) -> f64 {
    norm / f64::from(period).powf(d as f64 / 4.0)
}

/// `r_d(n)`: number of `z ∈ Z^d` with `‖z‖² = n`, for `n <= max_sq`.
pub fn lattice_points_by_norm_sq(d: usize, max_sq: usize) -> Vec<u64> {
    let mut r = vec![0u64; max_sq + 1];
    r[0] = 1;
    for _ in 0..d {
        let mut next = vec![0u64; max_sq + 1];
        for (n, &c) in r.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut k = 0usize;
            while n + k * k <= max_sq {
                next[n + k * k] += if k == 0 { c } else { 2 * c };
                k += 1;
            }
        }
        r = next;
    }
    r
}

// Enumerates all z with ‖z‖² <= max_sq (first orthant expanded by sign).
fn for_each_in_ball(d: usize, max_sq: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(z: &mut Vec<i64>, d: usize, left: i64, f: &mut impl FnMut(&[i64])) {
        if z.len() == d {
            f(z);
            return;
        }
        let mut k = 0i64;
        while k * k <= left {
            z.push(k);
            rec(z, d, left - k * k, f);
            z.pop();
            if k > 0 {
                z.push(-k);
                rec(z, d, left - k * k, f);
                z.pop();
            }
            k += 1;
        }
    }
    rec(&mut Vec::with_capacity(d), d, max_sq, f);
}

/// Radial profile up to `max_norm` (defaults to the largest observed norm).
pub fn radial_profile(
    hist: &TwoPointHistogram,
    period: u32,
    mode: ProfileMode,
    max_norm: Option<f64>,
) -> Result<Vec<ProfilePoint>> {
    let d = hist.dim();
    let max_norm = max_norm.unwrap_or_else(|| hist.max_norm());
    let mut out = Vec::new();
    let mut push = |norm: f64, set: Vec<Vec<i64>>, points: u64| -> Result<()> {
        let e = hist.estimate_sum(&set)?;
        let factor = norm.powi(d as i32 - 2) / points as f64;
        out.push(ProfilePoint {
            xi: xi_of(norm, d, period),
            norm,
            two_point: e.value / points as f64,
            scaled: e.value * factor,
            scaled_stderr: e.stderr * factor,
            points,
        });
        Ok(())
    };
    match mode {
        ProfileMode::OnAxis { axis } => {
            if axis >= d {
                return Err(Error::AxisOutOfRange { axis, dim: d });
            }
            for k in 1..=max_norm.floor() as i64 {
                push(k as f64, vec![unit_vector(d, axis, k)], 1)?;
            }
        }
        ProfileMode::AxisAverage => {
            for k in 1..=max_norm.floor() as i64 {
                let set: Vec<Vec<i64>> =
                    (0..d).flat_map(|j| [unit_vector(d, j, k), unit_vector(d, j, -k)]).collect();
                push(k as f64, set, 2 * d as u64)?;
            }
        }
        ProfileMode::Shells { width } => {
            if !(width > 0.0) {
                return Err(Error::param(format!("shell width must be positive, got {width}")));
            }
            let shells = (max_norm / width).floor() as usize + 1;
            // lattice points in the whole ball are enumerated once; this is meant for
            // the moderate radii of measured profiles
            let max_sq = (shells as f64 * width).powi(2).ceil() as i64;
            let mut sets: Vec<Vec<Vec<i64>>> = vec![Vec::new(); shells + 1];
            for_each_in_ball(d, max_sq, &mut |z| {
                let r = crate::lattice::euclidean_norm(z);
                let s = (r / width).floor() as usize;
                if r > 0.0 && s < shells {
                    sets[s].push(z.to_vec());
                }
            });
            for set in sets.into_iter().take(shells) {
                if set.is_empty() {
                    continue;
                }
                let mean_norm = set.iter().map(|z| crate::lattice::euclidean_norm(z)).sum::<f64>() / set.len() as f64;
                let n = set.len() as u64;
                push(mean_norm, set, n)?;
            }
        }
    }
    Ok(out)
}
