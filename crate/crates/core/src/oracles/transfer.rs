//! Ising spin correlations on small two-dimensional tori by transfer matrices.

use crate::error::{Error, Result};
use crate::lattice::TorusSpec;

type Matrix = Vec<Vec<f64>>;

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += x * b[k][j];
            }
        }
    }
    c
}

fn power(m: &Matrix, k: u32) -> Matrix {
    let n = m.len();
    let mut out: Matrix = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _ in 0..k {
        out = matmul(&out, m);
    }
    out
}

/// `E(σ_0 σ_v)` for every site `v` (by site index) of a two-dimensional torus of
/// period at most 4, at coupling `β = atanh(tanh_beta)`.
///
/// Columns run along the first axis and the transfer direction is the first axis.
/// On a period-2 torus each neighbouring pair is joined by two bonds, matching the
/// multigraph convention of the high-temperature expansion.
pub fn ising_correlations_transfer(spec: &TorusSpec, tanh_beta: f64) -> Result<Vec<f64>> {
    if spec.dim_usize() != 2 || spec.period() > 4 {
        return Err(Error::TooLarge(format!(
            "transfer matrix needs a two-dimensional torus of period <= 4, got d={} L={}",
            spec.dim_usize(),
            spec.period()
        )));
    }
    if !(0.0..1.0).contains(&tanh_beta) {
        return Err(Error::param(format!("tanh(beta) must lie in [0, 1), got {tanh_beta}")));
    }
    let beta = tanh_beta.atanh();
    let w = spec.period() as usize;
    let n = 1usize << w;
    let spin = |s: usize, i: usize| if s >> i & 1 == 1 { -1.0 } else { 1.0 };
    let m: Matrix = (0..n)
        .map(|s| {
            let intra: f64 = (0..w).map(|i| spin(s, i) * spin(s, (i + 1) % w)).sum();
            (0..n)
                .map(|t| {
                    let inter: f64 = (0..w).map(|i| spin(s, i) * spin(t, i)).sum();
                    (beta * (intra + inter)).exp()
                })
                .collect()
        })
        .collect();
    let powers: Vec<Matrix> = (0..=w as u32).map(|k| power(&m, k)).collect();
    let z: f64 = (0..n).map(|i| powers[w][i][i]).sum();
    let lo = spec.lo();
    let row0 = (0 - lo) as usize;
    let mut out = vec![0.0; spec.volume() as usize];
    for (index, slot) in out.iter_mut().enumerate() {
        let v = spec.coords_of(index as u64);
        let dc = (v[0] - 0).rem_euclid(w as i64) as usize;
        let rv = (v[1] - lo) as usize;
        // Tr(D_{row0} M^{dc} D_{rv} M^{w-dc})
        let (a, b) = (&powers[dc], &powers[w - dc]);
        let mut tr = 0.0;
        for i in 0..n {
            for j in 0..n {
                tr += spin(i, row0) * a[i][j] * spin(j, rv) * b[j][i];
            }
        }
        *slot = tr / z;
    }
    Ok(out)
}
