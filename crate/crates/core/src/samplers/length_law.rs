//! Laws of the random walk length `N`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::lattice::TorusSpec;

#[derive(Clone, Debug, PartialEq)]
pub enum LengthLaw {
    /// `N = n` almost surely.
    Deterministic(u64),
    /// `P(N >= n) = p^n`, i.e. `P(N = n) = (1 - p) p^n`.
    Geometric { p: f64 },
    /// `N = min(round(scale * |X|), cap)` with `X` standard normal, ties to even.
    ScaledHalfNormal { scale: f64, cap: u64 },
    /// `P(N = n) = probs[n]`.
    Empirical { probs: Vec<f64>, cdf: Vec<f64> },
}

impl LengthLaw {
    pub fn geometric(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::param(format!("geometric parameter must lie in [0, 1), got {p}")));
        }
        Ok(LengthLaw::Geometric { p })
    }

    pub fn scaled_half_normal(scale: f64, cap: u64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param(format!("half-normal scale must be positive, got {scale}")));
        }
        Ok(LengthLaw::ScaledHalfNormal { scale, cap })
    }

    /// Normalizes non-negative weights indexed by length.
    pub fn empirical(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || total <= 0.0 {
            return Err(Error::param("empirical length law needs non-negative weights with positive sum"));
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = probs.iter().map(|p| {
            acc += p;
            acc
        }).collect();
        *cdf.last_mut().unwrap() = 1.0;
        Ok(LengthLaw::Empirical { probs, cdf })
    }

    /// Asymptotic walk-length law of the critical complete-graph SAW on `n = L^d`
    /// vertices: `round(sqrt(n) |X|)` capped at `cap`.
    pub fn complete_graph(spec: &TorusSpec, cap: u64) -> Self {
        LengthLaw::ScaledHalfNormal { scale: (spec.volume() as f64).sqrt(), cap }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            LengthLaw::Deterministic(n) => *n,
            LengthLaw::Geometric { p } => {
                if *p == 0.0 {
                    return 0;
                }
                let u: f64 = 1.0 - rng.random::<f64>();
                (u.ln() / p.ln()).floor() as u64
            }
            LengthLaw::ScaledHalfNormal { scale, cap } => {
                let x: f64 = StandardNormal.sample(rng);
                round_capped(scale * x.abs(), *cap)
            }
            LengthLaw::Empirical { cdf, .. } => {
                let u: f64 = rng.random();
                cdf.partition_point(|&c| c <= u).min(cdf.len() - 1) as u64
            }
        }
    }

    /// `P(N >= n)`.
    pub fn survival(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        match self {
            LengthLaw::Deterministic(m) => f64::from(u8::from(n <= *m)),
            LengthLaw::Geometric { p } => p.powf(n as f64),
            LengthLaw::ScaledHalfNormal { scale, cap } => {
                if n > *cap {
                    0.0
                } else {
                    erfc((n as f64 - 0.5) / (scale * std::f64::consts::SQRT_2))
                }
            }
            LengthLaw::Empirical { probs, .. } => probs.iter().skip(n as usize).sum(),
        }
    }

    pub fn probability(&self, n: u64) -> f64 {
        self.survival(n) - self.survival(n + 1)
    }

    /// Largest possible value, if bounded.
    pub fn max(&self) -> Option<u64> {
        match self {
            LengthLaw::Deterministic(n) => Some(*n),
            LengthLaw::Geometric { p } if *p == 0.0 => Some(0),
            LengthLaw::Geometric { .. } => None,
            LengthLaw::ScaledHalfNormal { cap, .. } => Some(*cap),
            LengthLaw::Empirical { probs, .. } => Some(probs.len() as u64 - 1),
        }
    }

    /// `Σ_{n > n_max} P(N >= n) = E[(N - n_max)^+]`, which bounds the error of any
    /// truncated sum `Σ_{n <= n_max} P(N >= n) a_n` with `0 <= a_n <= 1`.
    pub fn excess_mass(&self, n_max: u64) -> f64 {
        match self {
            LengthLaw::Deterministic(m) => m.saturating_sub(n_max) as f64,
            LengthLaw::Geometric { p } => p.powf((n_max + 1) as f64) / (1.0 - p),
            LengthLaw::ScaledHalfNormal { cap, .. } => {
                let mut total = 0.0;
                let mut n = n_max + 1;
                while n <= *cap {
                    let s = self.survival(n);
                    total += s;
                    if s < 1e-300 || s < total * 1e-17 {
                        break;
                    }
                    n += 1;
                }
                total
            }
            LengthLaw::Empirical { probs, .. } => {
                (n_max + 1..probs.len() as u64).map(|n| self.survival(n)).sum()
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            LengthLaw::Geometric { p } => p / (1.0 - p),
            _ => self.excess_mass(0),
        }
    }
}

/// `round(x)` with ties to even, clamped to `[0, cap]`.
pub(crate) fn round_capped(x: f64, cap: u64) -> u64 {
    let r = x.round_ties_even();
    if r >= cap as f64 {
        cap
    } else if r <= 0.0 {
        0
    } else {
        r as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn deterministic_law() {
        let law = LengthLaw::Deterministic(3);
        assert_eq!(law.survival(3), 1.0);
        assert_eq!(law.survival(4), 0.0);
        assert_eq!(law.excess_mass(1), 2.0);
        assert_eq!(law.sample(&mut stream(1, 0)), 3);
    }

    #[test]
    fn geometric_survival_and_sampling() {
        let law = LengthLaw::geometric(0.6).unwrap();
        assert!((law.survival(3) - 0.216).abs() < 1e-15);
        let mut rng = stream(2, 0);
        let n = 200_000;
        let hits = (0..n).filter(|_| law.sample(&mut rng) >= 3).count() as f64 / n as f64;
        assert!((hits - 0.216).abs() < 4.0 * (0.216f64 * 0.784 / n as f64).sqrt());
        let mean_excess: f64 = (4..200).map(|k| law.survival(k)).sum();
        assert!((law.excess_mass(3) - mean_excess).abs() < 1e-12);
    }

    #[test]
    fn half_normal_rounding_and_cap() {
        assert_eq!(round_capped(2.5, 10), 2);
        assert_eq!(round_capped(3.5, 10), 4);
        assert_eq!(round_capped(1e9, 10), 10);
        let law = LengthLaw::scaled_half_normal(4.0, 6).unwrap();
        assert_eq!(law.survival(7), 0.0);
        let total: f64 = (0..=6).map(|n| law.probability(n)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        // P(round(4|X|) >= 1) = P(|X| >= 1/8)
        assert!((law.survival(1) - erfc(0.125 / std::f64::consts::SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn empirical_law() {
        let law = LengthLaw::empirical(&[1.0, 0.0, 3.0]).unwrap();
        assert!((law.survival(1) - 0.75).abs() < 1e-15);
        assert_eq!(law.max(), Some(2));
        let mut rng = stream(3, 0);
        for _ in 0..1000 {
            assert_ne!(law.sample(&mut rng), 1);
        }
        assert!(LengthLaw::empirical(&[0.0]).is_err());
        assert!(LengthLaw::empirical(&[-1.0, 2.0]).is_err());
    }
}
