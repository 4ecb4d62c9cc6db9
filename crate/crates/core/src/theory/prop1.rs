//! Scaling limit of `‖z‖^{d-2} g(z)` for random-length walks with diffusive-scale
//! length law `G`, and the collapse family `H_d`.
//!
//! Both are integrals of the form
//!
//! ```text
//! c_d ∫_0^∞ s^{d/2-2} e^{-s} [1 - G(d ξ² / 2s)] ds,     c_d = d / (2 π^{d/2}),
//! ```
//!
//! evaluated by adaptive Gauss–Kronrod. On the first segment `s = u²` removes the
//! `s^{-1/2}` endpoint singularity at `d = 3`; the last segment is mapped to `[0, 1)`.
//! Jumps and kinks of `G` become segment boundaries.

use std::f64::consts::PI;

use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};

use super::laws::{Affine, LimitLaw, StandardizedHalfNormal};
use super::quadrature::{integrate, integrate_to_infinity, Estimate, Tolerance};

/// `d / (2 π^{d/2})`.
pub fn prefactor(d: usize) -> f64 {
    d as f64 / (2.0 * PI.powf(d as f64 / 2.0))
}

/// `c_d Γ(d/2 - 1)`, the `ξ → 0` value (simple random walk Green function amplitude).
pub fn srw_limit_constant(d: usize) -> f64 {
    prefactor(d) * gamma(d as f64 / 2.0 - 1.0)
}

/// Closed form for `G = 1(x >= at)`: `c_d Γ(d/2-1, d ξ² / (2 at))` (upper incomplete).
pub fn point_mass_closed_form(d: usize, xi: f64, at: f64) -> f64 {
    let a = d as f64 / 2.0 - 1.0;
    srw_limit_constant(d) * gamma_ur(a, d as f64 * xi * xi / (2.0 * at))
}

fn check_dim(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::param(format!("the limit integral needs d >= 3, got {d}")));
    }
    Ok(())
}

/// The limit integral with its quadrature error bound.
pub fn prop1_integral(g: &impl LimitLaw, d: usize, xi: f64, tol: Tolerance) -> Result<Estimate> {
    check_dim(d)?;
    if xi.is_nan() || xi <= 0.0 {
        return Err(Error::param(format!("xi must lie in (0, inf], got {xi}")));
    }
    let c = prefactor(d);
    if xi.is_infinite() {
        let v = srw_limit_constant(d) * (1.0 - g.sup());
        return Ok(Estimate { value: v, error: 0.0 });
    }
    let scale = d as f64 * xi * xi / 2.0;
    let half = d as f64 / 2.0 - 2.0;
    let tail = |s: f64| 1.0 - g.cdf(scale / s);
    let body = |s: f64| {
        if s <= 0.0 {
            0.0
        } else {
            s.powf(half) * (-s).exp() * tail(s)
        }
    };

    let mut cuts: Vec<f64> = g
        .atoms()
        .into_iter()
        .filter(|&a| a > 0.0 && a.is_finite())
        .map(|a| scale / a)
        .chain([1.0])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    // Each segment gets an equal share of the tolerance.
    let share = Tolerance { abs: tol.abs / (cuts.len() + 1) as f64, ..tol };
    let first = cuts[0].sqrt();
    let dm3 = d as i32 - 3;
    let mut total = integrate(
        |u: f64| {
            if u <= 0.0 {
                return if dm3 == 0 { 2.0 * tail(0.0) } else { 0.0 };
            }
            2.0 * u.powi(dm3) * (-u * u).exp() * tail(u * u)
        },
        0.0,
        first,
        share,
    )?;
    for w in cuts.windows(2) {
        total = total + integrate(body, w[0], w[1], share)?;
    }
    total = total + integrate_to_infinity(body, *cuts.last().unwrap(), share)?;
    Ok(total * c)
}

/// `c_d ∫ s^{d/2-2} e^{-s} [1 - G(d ξ²/2s)] ds` to absolute tolerance `1e-9`.
pub fn prop1_rhs(g: &impl LimitLaw, d: usize, xi: f64) -> Result<f64> {
    prop1_integral(g, d, xi, Tolerance::default()).map(|e| e.value)
}

/// Parameters `(α, β, γ)` of `H_d`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CollapseParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub d: usize,
}

impl CollapseParams {
    pub fn new(d: usize, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_dim(d)?;
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::param(format!("need alpha, beta > 0, got alpha={alpha}, beta={beta}, gamma={gamma}")));
        }
        Ok(CollapseParams { alpha, beta, gamma, d })
    }

    /// Exact prediction for a random-length random walk whose length is
    /// `L^{d/2}(B + A Y)` with `Y ~ F`: `α = 1, β = 1/A, γ = B/A`.
    pub fn rlrw(d: usize, sd_amplitude: f64, mean_amplitude: f64) -> Result<Self> {
        Self::new(d, 1.0, 1.0 / sd_amplitude, mean_amplitude / sd_amplitude)
    }

    /// Curve drawn through critical SAW data, given the length amplitudes
    /// `sd ~ A L^{d/2}` and `mean ~ B L^{d/2}`.
    pub fn saw(d: usize, sd_amplitude: f64, mean_amplitude: f64) -> Result<Self> {
        Self::new(d, 0.85, 1.5 / sd_amplitude, mean_amplitude / sd_amplitude)
    }

    /// Curve drawn through critical Ising data, amplitudes as for [`Self::saw`].
    pub fn ising(d: usize, sd_amplitude: f64, mean_amplitude: f64) -> Result<Self> {
        Self::new(d, 1.0, 1.2 / sd_amplitude, mean_amplitude / sd_amplitude)
    }

    /// Curve drawn through loop-erased walks with complete-graph lengths, where
    /// `A = sqrt(1 - 2/π)` and `B/A = φ`.
    pub fn rllerw_complete_graph(d: usize) -> Result<Self> {
        let a = (1.0 - 2.0 / PI).sqrt();
        Self::new(d, 0.75, 1.2 / a, super::laws::phi_constant())
    }
}

/// `H_d(α, β, γ; ξ)` with `F` replaced by an arbitrary law.
pub fn h_d_with(params: &CollapseParams, f: &impl LimitLaw, xi: f64) -> Result<f64> {
    let g = Affine { inner: f, beta: params.beta, gamma: params.gamma };
    Ok(params.alpha * prop1_rhs(&g, params.d, xi)?)
}

/// `H_d(α, β, γ; ξ) = α c_d ∫ s^{d/2-2} e^{-s} [1 - F(β dξ²/2s - γ)] ds`.
pub fn h_d(params: &CollapseParams, xi: f64) -> Result<f64> {
    h_d_with(params, &StandardizedHalfNormal, xi)
}

/// Weighted least-squares amplitude `α` (and its standard error) matching
/// `α · H_d(1, β, γ; ξ)` to points `(ξ, y, stderr)`.
pub fn fit_amplitude(params: &CollapseParams, points: &[(f64, f64, f64)]) -> Result<(f64, f64)> {
    let unit = CollapseParams { alpha: 1.0, ..*params };
    let (mut num, mut den) = (0.0, 0.0);
    for &(xi, y, se) in points {
        if !(se > 0.0) {
            continue;
        }
        let h = h_d(&unit, xi)?;
        let w = 1.0 / (se * se);
        num += w * y * h;
        den += w * h * h;
    }
    if den == 0.0 {
        return Err(Error::InsufficientData("no points with positive standard error".into()));
    }
    Ok((num / den, den.sqrt().recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::laws::{FnLaw, InfiniteLength, PointMass};
    use approx::assert_relative_eq;

    #[test]
    fn infinite_length_gives_srw_constant() {
        for d in [3, 4, 5, 6, 8] {
            let v = prop1_rhs(&InfiniteLength, d, 0.7).unwrap();
            assert_relative_eq!(v, srw_limit_constant(d), max_relative = 1e-8);
        }
        assert_relative_eq!(srw_limit_constant(5), 5.0 / (4.0 * PI * PI), max_relative = 1e-14);
    }

    #[test]
    fn point_mass_matches_incomplete_gamma() {
        for d in [3, 5, 6] {
            for xi in [0.1, 0.5, 1.0, 2.0, 3.0] {
                let v = prop1_rhs(&PointMass { at: 1.0 }, d, xi).unwrap();
                assert_relative_eq!(v, point_mass_closed_form(d, xi, 1.0), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn infinite_xi_is_symbolic() {
        assert_eq!(prop1_rhs(&PointMass { at: 1.0 }, 5, f64::INFINITY).unwrap(), 0.0);
        let defective = FnLaw { f: |x: f64| 0.5 * (1.0 - (-x).exp()), atoms: vec![], sup: 0.5, label: "half".into() };
        let v = prop1_rhs(&defective, 5, f64::INFINITY).unwrap();
        assert_relative_eq!(v, 0.5 * srw_limit_constant(5), max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(prop1_rhs(&InfiniteLength, 2, 1.0).is_err());
        assert!(prop1_rhs(&InfiniteLength, 5, 0.0).is_err());
        assert!(prop1_rhs(&InfiniteLength, 5, f64::NAN).is_err());
        assert!(CollapseParams::new(5, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn small_beta_limit() {
        let p = CollapseParams::new(5, 0.8, 1e-9, 0.4).unwrap();
        let expect = 0.8 * srw_limit_constant(5) * (1.0 - crate::theory::standardized_f(-0.4));
        assert_relative_eq!(h_d(&p, 1.0).unwrap(), expect, max_relative = 1e-7);
    }

    #[test]
    fn h_d_reduces_to_step_law() {
        let p = CollapseParams::new(5, 1.0, 1.3, 0.7).unwrap();
        for xi in [0.3, 1.0, 1.7] {
            let h = h_d_with(&p, &PointMass { at: 0.0 }, xi).unwrap();
            let g = prop1_rhs(&PointMass { at: 0.7 / 1.3 }, 5, xi).unwrap();
            assert_relative_eq!(h, g, epsilon = 1e-9);
        }
    }

    #[test]
    fn h_d_is_decreasing() {
        let p = CollapseParams::rllerw_complete_graph(5).unwrap();
        let vals: Vec<f64> = (1..=40).map(|k| h_d(&p, 0.1 * k as f64).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(vals[0] <= 0.75 * srw_limit_constant(5));
    }

    #[test]
    fn amplitude_fit_recovers_alpha() {
        let p = CollapseParams::saw(5, 0.6, 0.9).unwrap();
        let pts: Vec<(f64, f64, f64)> = [0.3, 0.8, 1.5, 2.2]
            .iter()
            .map(|&xi| (xi, h_d(&p, xi).unwrap(), 0.01))
            .collect();
        let (alpha, _) = fit_amplitude(&p, &pts).unwrap();
        assert_relative_eq!(alpha, 0.85, max_relative = 1e-10);
    }
}
