//! Empirical distribution functions stored as sorted run lengths.

use serde::Serialize;

use crate::error::{Error, Result};

const BUFFER: usize = 1 << 16;

/// Samples kept as sorted `(value, multiplicity)` runs; unsorted arrivals are
/// buffered and folded in when the buffer fills. Lengths repeat heavily, so memory
/// stays proportional to the number of distinct values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EcdfAccumulator {
    runs: Vec<(f64, u64)>,
    buffer: Vec<f64>,
}

/// One jump of a standardized ECDF: `F̂(x) = cumulative` for `x` at or beyond `x_std`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EcdfPoint {
    pub value: f64,
    pub x_std: f64,
    pub cumulative: f64,
}

impl EcdfAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples(samples: impl IntoIterator<Item = f64>) -> Self {
        let mut e = Self::new();
        samples.into_iter().for_each(|x| e.push(x));
        e
    }

    pub fn push(&mut self, x: f64) {
        debug_assert!(x.is_finite());
        self.buffer.push(x);
        if self.buffer.len() >= BUFFER {
            self.compact();
        }
    }

    fn compact(&mut self) {
        if self.buffer.is_empty() {
            return;
        }
        self.buffer.sort_unstable_by(f64::total_cmp);
        let mut incoming: Vec<(f64, u64)> = Vec::new();
        for &x in &self.buffer {
            match incoming.last_mut() {
                Some((v, c)) if *v == x => *c += 1,
                _ => incoming.push((x, 1)),
            }
        }
        self.buffer.clear();
        self.runs = merge_runs(&self.runs, &incoming);
    }

    pub fn merge(&mut self, other: &EcdfAccumulator) {
        self.compact();
        let mut o = other.clone();
        o.compact();
        self.runs = merge_runs(&self.runs, &o.runs);
    }

    pub fn runs(&mut self) -> &[(f64, u64)] {
        self.compact();
        &self.runs
    }

    pub fn count(&self) -> u64 {
        self.runs.iter().map(|r| r.1).sum::<u64>() + self.buffer.len() as u64
    }

    /// Sample mean and standard deviation (`n - 1` denominator).
    pub fn mean_sd(&mut self) -> Result<(f64, f64)> {
        self.compact();
        let n = self.count() as f64;
        if n < 2.0 {
            return Err(Error::InsufficientData("ECDF needs at least two samples".into()));
        }
        let mean = self.runs.iter().map(|&(v, c)| v * c as f64).sum::<f64>() / n;
        let ss = self.runs.iter().map(|&(v, c)| (v - mean).powi(2) * c as f64).sum::<f64>();
        Ok((mean, (ss / (n - 1.0)).sqrt()))
    }

    /// Jumps of the ECDF of `(x - mean) / sd`, standardized by the sample moments.
    pub fn standardized(&mut self) -> Result<Vec<EcdfPoint>> {
        let (mean, sd) = self.mean_sd()?;
        if sd == 0.0 {
            return Err(Error::InsufficientData("ECDF of a constant sample cannot be standardized".into()));
        }
        let n = self.count() as f64;
        let mut acc = 0u64;
        Ok(self
            .runs
            .iter()
            .map(|&(v, c)| {
                acc += c;
                EcdfPoint { value: v, x_std: (v - mean) / sd, cumulative: acc as f64 / n }
            })
            .collect())
    }

    /// Kolmogorov–Smirnov distance between the standardized ECDF and `cdf`.
    pub fn ks_distance(&mut self, cdf: impl Fn(f64) -> f64) -> Result<f64> {
        let pts = self.standardized()?;
        Ok(ks_from_points(&pts, cdf))
    }

    /// Kolmogorov–Smirnov distance of the raw (unstandardized) sample from `cdf`.
    pub fn ks_distance_raw(&mut self, cdf: impl Fn(f64) -> f64) -> Result<f64> {
        self.compact();
        let n = self.count() as f64;
        if n == 0.0 {
            return Err(Error::InsufficientData("empty ECDF".into()));
        }
        let mut acc = 0u64;
        let pts: Vec<EcdfPoint> = self
            .runs
            .iter()
            .map(|&(v, c)| {
                acc += c;
                EcdfPoint { value: v, x_std: v, cumulative: acc as f64 / n }
            })
            .collect();
        Ok(ks_from_points(&pts, cdf))
    }
}

fn ks_from_points(pts: &[EcdfPoint], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut prev = 0.0;
    let mut d: f64 = 0.0;
    for p in pts {
        let f = cdf(p.x_std);
        d = d.max((p.cumulative - f).abs()).max((prev - f).abs());
        prev = p.cumulative;
    }
    d
}

fn merge_runs(a: &[(f64, u64)], b: &[(f64, u64)]) -> Vec<(f64, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j == b.len() || (i < a.len() && a[i].0 <= b[j].0) {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        match out.last_mut() {
            Some((v, c)) if *v == next.0 => *c += next.1,
            _ => out.push(next),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::laws::{LimitLaw, StandardizedHalfNormal};
    use crate::rng::stream;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn runs_collapse_duplicates() {
        let mut e = EcdfAccumulator::from_samples([3.0, 1.0, 3.0, 2.0, 1.0, 3.0]);
        assert_eq!(e.runs(), &[(1.0, 2), (2.0, 1), (3.0, 3)]);
        let mut other = EcdfAccumulator::from_samples([2.0, 4.0]);
        e.merge(&other);
        assert_eq!(e.runs(), &[(1.0, 2), (2.0, 2), (3.0, 3), (4.0, 1)]);
        assert_eq!(other.runs().len(), 2);
    }

    #[test]
    fn standardized_moments() {
        let mut e = EcdfAccumulator::from_samples((1..=100).map(f64::from));
        let (m, s) = e.mean_sd().unwrap();
        assert!((m - 50.5).abs() < 1e-12);
        assert!((s - 29.011491975882016).abs() < 1e-9);
        let pts = e.standardized().unwrap();
        assert_eq!(pts.last().unwrap().cumulative, 1.0);
    }

    #[test]
    fn half_normal_sample_is_close() {
        let mut rng = stream(9, 0);
        let mut e = EcdfAccumulator::new();
        for _ in 0..200_000 {
            let x: f64 = StandardNormal.sample(&mut rng);
            e.push(x.abs());
        }
        let law = StandardizedHalfNormal;
        let ks = e.ks_distance(|x| law.cdf(x)).unwrap();
        assert!(ks < 0.01, "{ks}");
    }

    #[test]
    fn constant_sample_rejected() {
        let mut e = EcdfAccumulator::from_samples([1.0; 10]);
        assert!(e.standardized().is_err());
    }
}
