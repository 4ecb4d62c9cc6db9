//! Exact simple-random-walk kernels `p_n(z) = P(S_n = z)` on `Z^d` and the
//! random-length walk Green function built from them.

use crate::error::{Error, Result};
use crate::lattice::parity;
use crate::samplers::LengthLaw;
use crate::theory::quadrature::{integrate, integrate_to_infinity, Tolerance};

/// Largest table (number of `f64` entries) [`srw_convolve`] will allocate.
pub const MAX_TABLE_ENTRIES: u64 = 1 << 26;

/// `p_n(z)` for `0 <= n <= n_max` on the box `‖z‖_∞ <= radius`.
#[derive(Clone, Debug)]
pub struct SrwKernelTable {
    d: usize,
    n_max: u64,
    radius: u64,
    side: usize,
    data: Vec<f64>,
    leaked: Vec<f64>,
}

impl SrwKernelTable {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    fn cells(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    fn offset(&self, z: &[i64]) -> Option<usize> {
        let r = self.radius as i64;
        let mut idx = 0usize;
        for &x in z {
            if x.abs() > r {
                return None;
            }
            idx = idx * self.side + (x + r) as usize;
        }
        Some(idx)
    }

    /// `p_n(z)`, or `None` outside the box.
    pub fn get(&self, n: u64, z: &[i64]) -> Option<f64> {
        assert_eq!(z.len(), self.d);
        if n > self.n_max {
            return None;
        }
        self.offset(z).map(|i| self.data[n as usize * self.cells() + i])
    }

    /// Probability mass that left the box by step `n` (0 when `radius >= n`).
    pub fn leaked_mass(&self, n: u64) -> f64 {
        self.leaked[n as usize]
    }

    /// `Σ_z p_n(z)` over the box.
    pub fn total(&self, n: u64) -> f64 {
        let c = self.cells();
        self.data[n as usize * c..(n as usize + 1) * c].iter().sum()
    }

    /// `[p_0(z), ..., p_{n_max}(z)]`.
    pub fn series(&self, z: &[i64]) -> Option<Vec<f64>> {
        (0..=self.n_max).map(|n| self.get(n, z)).collect()
    }
}

/// Tabulates `p_{n+1}(z) = (1/2d) Σ_e p_n(z - e)` on a box. Mass stepping out of the
/// box is dropped and accounted in [`SrwKernelTable::leaked_mass`].
pub fn srw_convolve(d: usize, n_max: u64, radius: u64) -> Result<SrwKernelTable> {
    if d == 0 {
        return Err(Error::param("dimension must be positive"));
    }
    let side = 2 * radius as usize + 1;
    let entries = (side as u64)
        .checked_pow(d as u32)
        .and_then(|c| c.checked_mul(n_max + 1))
        .filter(|&e| e <= MAX_TABLE_ENTRIES);
    let Some(entries) = entries else {
        return Err(Error::TooLarge(format!(
            "kernel table for d={d}, n_max={n_max}, radius={radius} needs about {:.3e} entries ({:.1} GiB); limit is {MAX_TABLE_ENTRIES}",
            (side as f64).powi(d as i32) * (n_max + 1) as f64,
            (side as f64).powi(d as i32) * (n_max + 1) as f64 * 8.0 / (1u64 << 30) as f64
        )));
    };
    let cells = side.pow(d as u32);
    let mut data = vec![0.0; entries as usize];
    let mut leaked = vec![0.0; n_max as usize + 1];
    let strides: Vec<usize> = (0..d).map(|k| side.pow((d - 1 - k) as u32)).collect();
    let mut table = SrwKernelTable { d, n_max, radius, side, data: Vec::new(), leaked: Vec::new() };
    let origin = table.offset(&vec![0; d]).expect("origin in box");
    data[origin] = 1.0;
    let w = 1.0 / (2 * d) as f64;
    let mut coord = vec![0usize; d];
    for n in 0..n_max as usize {
        let (prev, next) = data[n * cells..(n + 2) * cells].split_at_mut(cells);
        let mut lost = 0.0;
        for (i, &p) in prev.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut rem = i;
            for k in 0..d {
                coord[k] = rem / strides[k];
                rem %= strides[k];
            }
            for k in 0..d {
                if coord[k] + 1 < side {
                    next[i + strides[k]] += w * p;
                } else {
                    lost += w * p;
                }
                if coord[k] > 0 {
                    next[i - strides[k]] += w * p;
                } else {
                    lost += w * p;
                }
            }
        }
        leaked[n + 1] = leaked[n] + lost;
    }
    table.data = data;
    table.leaked = leaked;
    Ok(table)
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// `[p_0(z), ..., p_{n_max}(z)]` at a single point, in `O(d n_max²)` time.
///
/// Each step picks one of the remaining axes uniformly, so the walk restricted to
/// axes `j..d` satisfies
/// `F_j(n) = Σ_m C(n,m) r^m (1-r)^{n-m} q_m(z_j) F_{j+1}(n-m)` with `r = 1/(d-j)` and
/// `q_m(k) = C(m, (m+k)/2) / 2^m` the one-dimensional kernel.
pub fn srw_point_kernel(z: &[i64], n_max: u64) -> Vec<f64> {
    let d = z.len();
    assert!(d >= 1);
    let n = n_max as usize;
    let lf = ln_factorials(n);
    let ln2 = std::f64::consts::LN_2;
    let q = |m: usize, k: i64| -> f64 {
        let k = k.unsigned_abs() as usize;
        if k > m || (m + k) % 2 == 1 {
            0.0
        } else {
            let up = (m + k) / 2;
            (lf[m] - lf[up] - lf[m - up] - m as f64 * ln2).exp()
        }
    };
    let mut f: Vec<f64> = (0..=n).map(|m| q(m, z[d - 1])).collect();
    for j in (0..d - 1).rev() {
        let r = 1.0 / (d - j) as f64;
        let (lr, lr1) = (r.ln(), (1.0 - r).ln());
        let qj: Vec<f64> = (0..=n).map(|m| q(m, z[j])).collect();
        let mut g = vec![0.0; n + 1];
        for (total, slot) in g.iter_mut().enumerate() {
            let mut acc = 0.0;
            for m in 0..=total {
                if qj[m] == 0.0 || f[total - m] == 0.0 {
                    continue;
                }
                let ln_binom = lf[total] - lf[m] - lf[total - m] + m as f64 * lr + (total - m) as f64 * lr1;
                acc += ln_binom.exp() * qj[m] * f[total - m];
            }
            *slot = acc;
        }
        f = g;
    }
    f
}

/// `Σ_{n <= n_max} P(N >= n) p_n(z)` with the bound `E[(N - n_max)^+]` on the omitted
/// terms.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct OracleValue {
    pub value: f64,
    pub truncation_bound: f64,
}

/// The random-length walk Green function on `Z^d` from a kernel series `p[n] = p_n(z)`.
pub fn oracle_rlrw_two_point(law: &LengthLaw, p: &[f64]) -> OracleValue {
    let n_max = p.len() as u64 - 1;
    let value = p.iter().enumerate().map(|(n, &pn)| law.survival(n as u64) * pn).sum();
    OracleValue { value, truncation_bound: law.excess_mass(n_max) }
}

/// Like [`oracle_rlrw_two_point`], choosing `n_max` so that the truncation bound is at
/// most `bound`. Fails if that would need more than `limit` terms.
pub fn oracle_rlrw_at(law: &LengthLaw, z: &[i64], bound: f64, limit: u64) -> Result<OracleValue> {
    let upper = law.max().unwrap_or(u64::MAX).min(limit).max(1);
    let mut n_max = upper.min(64);
    while law.excess_mass(n_max) > bound {
        if n_max == upper {
            return Err(Error::TooLarge(format!(
                "truncation error {:.3e} above {bound:e} at the term limit {limit}",
                law.excess_mass(n_max)
            )));
        }
        n_max = (n_max * 2).min(upper);
    }
    Ok(oracle_rlrw_two_point(law, &srw_point_kernel(z, n_max)))
}

/// `e^{-x} I_n(x)` by quadrature of `(1/π) ∫_0^π e^{x(cos θ - 1)} cos(nθ) dθ`.
pub fn scaled_bessel_i(n: i64, x: f64) -> Result<f64> {
    let n = n.unsigned_abs() as f64;
    let tol = Tolerance { abs: 1e-15, rel: 1e-13, max_intervals: 4000 };
    let v = integrate(|t: f64| (x * (t.cos() - 1.0)).exp() * (n * t).cos(), 0.0, std::f64::consts::PI, tol)?;
    Ok(v.value / std::f64::consts::PI)
}

/// `Σ_n p^n p_n(z)` from the continuous-time representation
/// `∫_0^∞ e^{-t} Π_j I_{z_j}(p t / d) dt`, independent of any kernel recursion.
pub fn lattice_green_function(z: &[i64], p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::param(format!("need 0 <= p < 1, got {p}")));
    }
    let d = z.len() as f64;
    let f = |t: f64| -> f64 {
        let x = p * t / d;
        let mut prod = (-(1.0 - p) * t).exp();
        for &k in z {
            prod *= scaled_bessel_i(k, x).unwrap_or(f64::NAN);
        }
        prod
    };
    let tol = Tolerance { abs: 1e-11, rel: 1e-10, max_intervals: 2000 };
    let head = integrate(f, 0.0, 1.0, tol)?;
    let tail = integrate_to_infinity(f, 1.0, tol)?;
    let v = head.value + tail.value;
    if !v.is_finite() {
        return Err(Error::Invariant("non-finite Bessel quadrature".into()));
    }
    Ok(v)
}

/// True when `p_n(z)` may be non-zero.
pub fn kernel_support(n: u64, z: &[i64]) -> bool {
    parity(n, z) && crate::lattice::l1_norm(z) <= n
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_steps() {
        for d in 1..=4 {
            let t = srw_convolve(d, 2, 2).unwrap();
            let mut e1 = vec![0; d];
            e1[0] = 1;
            assert_relative_eq!(t.get(1, &e1).unwrap(), 1.0 / (2 * d) as f64, max_relative = 1e-15);
            assert_relative_eq!(t.get(2, &vec![0; d]).unwrap(), 1.0 / (2 * d) as f64, max_relative = 1e-15);
            assert_eq!(t.get(2, &e1), Some(0.0));
        }
    }

    #[test]
    fn one_dimension_is_binomial() {
        let t = srw_convolve(1, 30, 30).unwrap();
        let lf = ln_factorials(30);
        for n in 0..=30u64 {
            for z in -(n as i64)..=(n as i64) {
                let exact = if (n as i64 + z) % 2 == 0 {
                    let k = ((n as i64 + z) / 2) as usize;
                    (lf[n as usize] - lf[k] - lf[n as usize - k]).exp() / 2f64.powi(n as i32)
                } else {
                    0.0
                };
                assert!((t.get(n, &[z]).unwrap() - exact).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mass_conservation_and_leak() {
        let t = srw_convolve(2, 12, 12).unwrap();
        for n in 0..=12 {
            assert!((t.total(n) - 1.0).abs() < 1e-13);
            assert_eq!(t.leaked_mass(n), 0.0);
        }
        let small = srw_convolve(2, 12, 3).unwrap();
        for n in 0..=12 {
            assert!((1.0 - small.total(n) - small.leaked_mass(n)).abs() < 1e-13);
        }
        assert!(small.leaked_mass(12) > 0.0);
    }

    #[test]
    fn refuses_huge_tables() {
        assert!(matches!(srw_convolve(5, 200, 200), Err(Error::TooLarge(_))));
    }

    #[test]
    fn point_kernel_matches_convolution() {
        let t = srw_convolve(3, 20, 20).unwrap();
        for z in [[0, 0, 0], [1, 0, 0], [2, -1, 1], [3, 3, 0], [-5, 2, 2]] {
            let p = srw_point_kernel(&z, 20);
            for n in 0..=20u64 {
                assert!((p[n as usize] - t.get(n, &z).unwrap()).abs() < 1e-14, "{z:?} {n}");
                if !kernel_support(n, &z) {
                    assert_eq!(p[n as usize], 0.0);
                }
            }
        }
    }

    #[test]
    fn rlrw_oracle_small_cases() {
        let p0 = srw_point_kernel(&[0], 2);
        let p1 = srw_point_kernel(&[1], 2);
        let det0 = LengthLaw::Deterministic(0);
        assert_eq!(oracle_rlrw_two_point(&det0, &p0).value, 1.0);
        assert_eq!(oracle_rlrw_two_point(&det0, &p1).value, 0.0);
        let det2 = LengthLaw::Deterministic(2);
        let v = oracle_rlrw_two_point(&det2, &p0);
        assert_relative_eq!(v.value, 1.5, max_relative = 1e-15);
        assert_eq!(v.truncation_bound, 0.0);
    }

    #[test]
    fn bessel_values() {
        // reference values of I_0(1) and I_3(2)
        assert_relative_eq!(scaled_bessel_i(0, 1.0).unwrap(), 0.465_759_607_593_640_4, max_relative = 1e-12);
        assert_relative_eq!(scaled_bessel_i(3, 2.0).unwrap() * 2f64.exp(), 0.212_739_959_239_852_6, max_relative = 1e-11);
    }
}
