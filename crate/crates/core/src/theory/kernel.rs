//! Gaussian approximation to the simple-random-walk kernel and the local-CLT error
//! sums that control the finite-`‖z‖` corrections.

use std::f64::consts::PI;

use crate::lattice::{euclidean_norm, parity};

/// `p̄_n(z) = 2 (d / 2πn)^{d/2} exp(-d ‖z‖² / 2n)`.
///
/// The factor 2 accounts for the parity constraint: `p_n(z) ≈ p̄_n(z)` when `n ↔ z`
/// and `p_n(z) = 0` otherwise.
pub fn gaussian_pbar(n: u64, z: &[i64]) -> f64 {
    assert!(n >= 1, "gaussian_pbar needs n >= 1");
    let d = z.len() as f64;
    let n = n as f64;
    let r2: f64 = z.iter().map(|&x| (x as f64) * (x as f64)).sum();
    2.0 * (d / (2.0 * PI * n)).powf(d / 2.0) * (-d * r2 / (2.0 * n)).exp()
}

/// Partial sums of the local-CLT error terms at a fixed `z`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LemmaSums {
    pub norm: f64,
    pub n_max: u64,
    /// `a = ⌈‖z‖⌉^{2 - 2ε/d}`.
    pub split: u64,
    /// `Σ_{1 <= n <= n_max, n ↔ z} |p_n(z) - p̄_n(z)|`.
    pub llt_sum: f64,
    /// The same sum restricted to `n <= a`.
    pub llt_below_split: f64,
    /// `Σ_{1 <= n <= n_max} |p̄_n(z) - p̄_{n+1}(z)|`.
    pub pbar_diff_sum: f64,
    pub pbar_diff_below_split: f64,
    /// `max_n n^{d/2+1} |p_n - p̄_n|` over the summed range (empirical `c₁` at this `z`).
    pub c1: f64,
    /// `max_n n^{d/2+1} |p̄_n - p̄_{n+1}|` (empirical `c₂`).
    pub c2: f64,
    /// `(2/d) c₁ n_max^{-d/2}`, bounding the omitted terms when `c₁` is uniform in `n`.
    pub llt_tail_bound: f64,
    pub pbar_diff_tail_bound: f64,
}

/// Evaluates the sums from exact kernel values `p[n] = p_n(z)`, `0 <= n <= n_max`.
///
/// Terms with `n` of the wrong parity are excluded from the first sum: there
/// `p_n(z) = 0` identically and `p̄_n` is not an approximation to it.
pub fn lemma_sums(z: &[i64], p: &[f64], epsilon: f64) -> LemmaSums {
    assert!(p.len() >= 2, "need p_n for at least n = 0, 1");
    let d = z.len() as f64;
    let n_max = p.len() as u64 - 1;
    let norm = euclidean_norm(z);
    let split = norm.ceil().powf(2.0 - 2.0 * epsilon / d).floor().max(1.0) as u64;
    let power = d / 2.0 + 1.0;
    let mut out = LemmaSums {
        norm,
        n_max,
        split,
        llt_sum: 0.0,
        llt_below_split: 0.0,
        pbar_diff_sum: 0.0,
        pbar_diff_below_split: 0.0,
        c1: 0.0,
        c2: 0.0,
        llt_tail_bound: 0.0,
        pbar_diff_tail_bound: 0.0,
    };
    let mut pbar_next = gaussian_pbar(1, z);
    for n in 1..=n_max {
        let pbar = pbar_next;
        pbar_next = gaussian_pbar(n + 1, z);
        let scale = (n as f64).powf(power);
        if parity(n, z) {
            let t = (p[n as usize] - pbar).abs();
            out.llt_sum += t;
            if n <= split {
                out.llt_below_split += t;
            }
            out.c1 = out.c1.max(t * scale);
        }
        let t = (pbar - pbar_next).abs();
        out.pbar_diff_sum += t;
        if n <= split {
            out.pbar_diff_below_split += t;
        }
        out.c2 = out.c2.max(t * scale);
    }
    let tail = 2.0 / d * (n_max as f64).powf(-d / 2.0);
    out.llt_tail_bound = out.c1 * tail;
    out.pbar_diff_tail_bound = out.c2 * tail;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pbar_values() {
        assert_relative_eq!(gaussian_pbar(1, &[0]), 2.0 / (2.0 * PI).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gaussian_pbar(1, &[0]), 0.7979, epsilon = 1e-4);
        assert_eq!(gaussian_pbar(7, &[3, -2, 1]), gaussian_pbar(7, &[-3, 2, -1]));
    }

    #[test]
    fn pbar_riemann_sum() {
        // Σ_z p̄_n(z)/2 over Z² with n = 100 is 1 up to exponentially small terms
        let mut total = 0.0;
        for x in -80i64..=80 {
            for y in -80i64..=80 {
                total += gaussian_pbar(100, &[x, y]) / 2.0;
            }
        }
        assert!((total - 1.0).abs() < 1e-2, "{total}");
    }

    #[test]
    fn pbar_difference_sum_is_even() {
        let p = vec![0.0; 200];
        let a = lemma_sums(&[5, -3, 2], &p, 0.1);
        let b = lemma_sums(&[-5, 3, -2], &p, 0.1);
        assert_eq!(a.pbar_diff_sum, b.pbar_diff_sum);
        assert_eq!(a.split, b.split);
    }
}
