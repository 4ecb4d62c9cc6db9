//! Exhaustive enumeration of self-avoiding walks and high-temperature graphs on tiny
//! tori.
//!
//! Results are stored as integer counts graded by size, so the weighted quantities for
//! any fugacity `J` or `tanh β` are polynomials evaluated afterwards.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{Space, Step, TorusSpec, TorusWalk};
use crate::samplers::ising_walk::IsingWalkExtractor;
use crate::samplers::worm::EdgeConfig;

/// Largest torus volume accepted by [`enumerate_saw`].
pub const SAW_VOLUME_LIMIT: u64 = 16;

/// Largest edge count accepted by [`enumerate_high_temperature`].
pub const HIGH_TEMPERATURE_EDGE_LIMIT: u64 = 20;

fn poly(coeffs: &[u64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Visits every self-avoiding walk rooted at the origin (as a step sequence; on a
/// period-2 torus the two parallel steps to a neighbour are distinct walks).
pub fn for_each_saw(spec: &TorusSpec, mut f: impl FnMut(&TorusWalk)) -> Result<()> {
    if spec.volume() > SAW_VOLUME_LIMIT {
        return Err(Error::TooLarge(format!(
            "SAW enumeration on {} sites (limit {SAW_VOLUME_LIMIT}); the count grows like (2d-1)^{}",
            spec.volume(),
            spec.volume()
        )));
    }
    let strides = spec.strides();
    let mut occupied = vec![false; spec.volume() as usize];
    let mut sites = vec![spec.origin_index()];
    occupied[spec.origin_index() as usize] = true;
    let mut walk = TorusWalk::root(*spec);
    let steps: Vec<Step> = Step::all(spec.dim()).collect();
    // Depth-first search with an explicit stack of next-direction cursors.
    let mut cursor = vec![0usize];
    f(&walk);
    while let Some(top) = cursor.last_mut() {
        if *top == steps.len() {
            cursor.pop();
            if let Some(s) = sites.pop() {
                if !cursor.is_empty() {
                    occupied[s as usize] = false;
                    walk.pop();
                }
            }
            continue;
        }
        let step = steps[*top];
        *top += 1;
        let here = *sites.last().expect("non-empty");
        let (next, _) = spec.neighbor(here, walk.endpoint()[step.axis()], step, &strides);
        if occupied[next as usize] {
            continue;
        }
        occupied[next as usize] = true;
        sites.push(next);
        walk.push(step);
        f(&walk);
        cursor.push(0);
    }
    Ok(())
}

/// All rooted SAWs of a torus, counted by length and by endpoint.
#[derive(Clone, Debug)]
pub struct SawEnumeration {
    spec: TorusSpec,
    /// Unwrapped endpoint `z` → counts `c_n(z)` indexed by length.
    unwrapped: BTreeMap<Vec<i64>, Vec<u64>>,
    /// Torus endpoint `x` → counts indexed by length.
    torus: BTreeMap<Vec<i64>, Vec<u64>>,
    lengths: Vec<u64>,
}

fn bump(map: &mut BTreeMap<Vec<i64>, Vec<u64>>, key: &[i64], n: usize) {
    let v = map.entry(key.to_vec()).or_default();
    if v.len() <= n {
        v.resize(n + 1, 0);
    }
    v[n] += 1;
}

/// Enumerates all rooted SAWs on `spec` (volume at most [`SAW_VOLUME_LIMIT`]).
pub fn enumerate_saw(spec: &TorusSpec) -> Result<SawEnumeration> {
    let mut e = SawEnumeration { spec: *spec, unwrapped: BTreeMap::new(), torus: BTreeMap::new(), lengths: Vec::new() };
    for_each_saw(spec, |w| {
        let n = w.len();
        if e.lengths.len() <= n {
            e.lengths.resize(n + 1, 0);
        }
        e.lengths[n] += 1;
        bump(&mut e.unwrapped, w.displacement(), n);
        bump(&mut e.torus, w.endpoint(), n);
    })?;
    Ok(e)
}

impl SawEnumeration {
    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    /// Number of SAWs of each length.
    pub fn length_counts(&self) -> &[u64] {
        &self.lengths
    }

    pub fn walk_count(&self) -> u64 {
        self.lengths.iter().sum()
    }

    /// `Σ_ω J^{|ω|}`.
    pub fn partition(&self, fugacity: f64) -> f64 {
        poly(&self.lengths, fugacity)
    }

    /// `P(|S| = n)` under `π(ω) ∝ J^{|ω|}`.
    pub fn length_law(&self, fugacity: f64) -> Vec<f64> {
        let z = self.partition(fugacity);
        self.lengths.iter().enumerate().map(|(n, &c)| c as f64 * fugacity.powi(n as i32) / z).collect()
    }

    /// `g̃(z) = Σ_n c_n(z) J^n`, which is also `P[e(W⁻¹ S) = z] / P[|S| = 0]`.
    pub fn unwrapped_two_point(&self, fugacity: f64) -> BTreeMap<Vec<i64>, f64> {
        self.unwrapped.iter().map(|(z, c)| (z.clone(), poly(c, fugacity))).collect()
    }

    /// `g(x) = Σ_{ω: 0 → x} J^{|ω|}` on the torus.
    pub fn torus_two_point(&self, fugacity: f64) -> BTreeMap<Vec<i64>, f64> {
        self.torus.iter().map(|(x, c)| (x.clone(), poly(c, fugacity))).collect()
    }

    /// Exact integer counts behind [`Self::unwrapped_two_point`].
    pub fn unwrapped_counts(&self) -> &BTreeMap<Vec<i64>, Vec<u64>> {
        &self.unwrapped
    }

    pub fn torus_counts(&self) -> &BTreeMap<Vec<i64>, Vec<u64>> {
        &self.torus
    }
}

/// High-temperature graphs `A ⊆ E` whose odd-degree vertices are `∅` or `{0, v}`,
/// counted by `|A|` and source, together with the lengths of their Ising walks.
#[derive(Clone, Debug)]
pub struct HighTempEnumeration {
    spec: TorusSpec,
    /// Site index `v` → counts of `A ∈ C_v` by `|A|` (`C_0` at the origin's index).
    by_head: Vec<Vec<u64>>,
    /// `|A|` → counts by `|T(A)|`, over all of `∪_v C_v`.
    walk_lengths: Vec<Vec<u64>>,
    /// Every admissible configuration as an edge bitmask, with its head.
    configs: Vec<(u64, u64)>,
}

/// Enumerates all `2^{|E|}` edge subsets in Gray-code order (at most
/// [`HIGH_TEMPERATURE_EDGE_LIMIT`] edges) and extracts the Ising walk of every
/// admissible one.
pub fn enumerate_high_temperature(spec: &TorusSpec) -> Result<HighTempEnumeration> {
    let edges = spec.edge_count();
    if edges > HIGH_TEMPERATURE_EDGE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{edges} edges means 2^{edges} subsets (limit 2^{HIGH_TEMPERATURE_EDGE_LIMIT})"
        )));
    }
    let d = spec.dim_usize() as u64;
    let strides = spec.strides();
    let ends: Vec<u64> = (0..edges)
        .map(|e| {
            let (x, axis) = (e / d, (e % d) as usize);
            let c = spec.coords_of(x);
            let (y, _) = spec.neighbor(x, c[axis], Step::new(axis, true), &strides);
            (1u64 << x) ^ (1u64 << y)
        })
        .collect();
    let origin = spec.origin_index();
    let mut out = HighTempEnumeration {
        spec: *spec,
        by_head: vec![vec![0; edges as usize + 1]; spec.volume() as usize],
        walk_lengths: vec![Vec::new(); edges as usize + 1],
        configs: Vec::new(),
    };
    let mut extractor = IsingWalkExtractor::new();
    let (mut mask, mut odd) = (0u64, 0u64);
    for k in 0..(1u64 << edges) {
        if k > 0 {
            let e = k.trailing_zeros() as usize;
            mask ^= 1 << e;
            odd ^= ends[e];
        }
        let head = match odd.count_ones() {
            0 => origin,
            2 if odd >> origin & 1 == 1 => (odd ^ (1 << origin)).trailing_zeros() as u64,
            _ => continue,
        };
        let size = mask.count_ones() as usize;
        out.by_head[head as usize][size] += 1;
        let walk = extractor.extract(&EdgeConfig::from_mask(*spec, mask, head))?;
        if spec.index_of(walk.endpoint()) != head {
            return Err(Error::Invariant(format!("Ising walk of mask {mask:#x} ends away from its head")));
        }
        let row = &mut out.walk_lengths[size];
        if row.len() <= walk.len() {
            row.resize(walk.len() + 1, 0);
        }
        row[walk.len()] += 1;
        out.configs.push((mask, head));
    }
    Ok(out)
}

impl HighTempEnumeration {
    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    /// `λ(C_v) = Σ_{A ∈ C_v} t^{|A|}`.
    pub fn lambda(&self, v: &[i64], tanh_beta: f64) -> f64 {
        poly(&self.by_head[self.spec.index_of(v) as usize], tanh_beta)
    }

    /// `E(σ_0 σ_v) = λ(C_v) / λ(C_0)`, indexed by site index.
    pub fn correlations(&self, tanh_beta: f64) -> Vec<f64> {
        let l0 = poly(&self.by_head[self.spec.origin_index() as usize], tanh_beta);
        self.by_head.iter().map(|c| poly(c, tanh_beta) / l0).collect()
    }

    /// Law of the worm head under `π(A) ∝ t^{|A|}` on `∪_v C_v`, indexed by site index.
    pub fn head_law(&self, tanh_beta: f64) -> Vec<f64> {
        let w: Vec<f64> = self.by_head.iter().map(|c| poly(c, tanh_beta)).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    /// Law of `|T(A)|` under the same measure.
    pub fn walk_length_law(&self, tanh_beta: f64) -> Vec<f64> {
        let longest = self.walk_lengths.iter().map(Vec::len).max().unwrap_or(1);
        let mut law = vec![0.0; longest];
        for (size, row) in self.walk_lengths.iter().enumerate() {
            let w = tanh_beta.powi(size as i32);
            for (m, &c) in row.iter().enumerate() {
                law[m] += c as f64 * w;
            }
        }
        let total: f64 = law.iter().sum();
        law.iter_mut().for_each(|p| *p /= total);
        law
    }

    /// Admissible configurations as `(edge bitmask, head index)`.
    pub fn configs(&self) -> &[(u64, u64)] {
        &self.configs
    }

    /// Counts of `A ∈ C_v` by `|A|`, indexed by site index of `v`.
    pub fn counts_by_head(&self) -> &[Vec<u64>] {
        &self.by_head
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_saws() {
        let spec = TorusSpec::new(1, 4).unwrap();
        let e = enumerate_saw(&spec).unwrap();
        assert_eq!(e.length_counts(), &[1, 2, 2, 2]);
        let j = 0.3;
        let law = e.length_law(j);
        let z = 1.0 + 2.0 * j + 2.0 * j * j + 2.0 * j * j * j;
        assert!((law[3] - 2.0 * j.powi(3) / z).abs() < 1e-15);
        assert_eq!(e.unwrapped_counts()[&vec![3]], vec![0, 0, 0, 1]);
        assert_eq!(e.unwrapped_counts()[&vec![-3]], vec![0, 0, 0, 1]);
        assert!((e.unwrapped_two_point(j)[&vec![-3]] - j.powi(3)).abs() < 1e-16);
    }

    #[test]
    fn zero_fugacity_keeps_only_the_root() {
        let e = enumerate_saw(&TorusSpec::new(2, 3).unwrap()).unwrap();
        let law = e.length_law(0.0);
        assert_eq!(law[0], 1.0);
        assert!(law[1..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn fine_graining_on_enumerated_saws() {
        for (d, l) in [(2, 3), (2, 2), (1, 5)] {
            let spec = TorusSpec::new(d, l).unwrap();
            let e = enumerate_saw(&spec).unwrap();
            let mut folded: BTreeMap<Vec<i64>, Vec<u64>> = BTreeMap::new();
            for (z, c) in e.unwrapped_counts() {
                let x = spec.reduce_site(z);
                let v = folded.entry(x).or_default();
                if v.len() < c.len() {
                    v.resize(c.len(), 0);
                }
                for (a, b) in v.iter_mut().zip(c) {
                    *a += b;
                }
            }
            assert_eq!(&folded, e.torus_counts());
        }
    }

    #[test]
    fn refuses_large_saw_enumeration() {
        assert!(matches!(enumerate_saw(&TorusSpec::new(2, 5).unwrap()), Err(Error::TooLarge(_))));
    }

    #[test]
    fn four_cycle_lambdas() {
        let spec = TorusSpec::new(1, 4).unwrap();
        let e = enumerate_high_temperature(&spec).unwrap();
        let t: f64 = 0.37;
        assert!((e.lambda(&[0], t) - (1.0 + t.powi(4))).abs() < 1e-15);
        assert!((e.lambda(&[1], t) - (t + t.powi(3))).abs() < 1e-15);
        assert!((e.lambda(&[-1], t) - (t + t.powi(3))).abs() < 1e-15);
        assert!((e.lambda(&[-2], t) - 2.0 * t * t).abs() < 1e-15);
    }

    #[test]
    fn small_tanh_beta_decorrelates() {
        let e = enumerate_high_temperature(&TorusSpec::new(2, 2).unwrap()).unwrap();
        let c = e.correlations(1e-9);
        let origin = e.spec().origin_index() as usize;
        for (v, &x) in c.iter().enumerate() {
            if v == origin {
                assert_eq!(x, 1.0);
            } else {
                assert!(x < 1e-8);
            }
        }
    }

    #[test]
    fn ising_walk_lengths_are_consistent() {
        let e = enumerate_high_temperature(&TorusSpec::new(2, 2).unwrap()).unwrap();
        let law = e.walk_length_law(0.5);
        assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        // C_0 configurations all have |T| = 0 and C_v ones have |T| >= 1
        let head = e.head_law(0.5);
        let origin = e.spec().origin_index() as usize;
        assert!((law[0] - head[origin]).abs() < 1e-14);
        assert_eq!(e.configs().len() as u64, e.counts_by_head().iter().flatten().sum::<u64>());
    }

    #[test]
    fn refuses_large_edge_sets() {
        assert!(matches!(enumerate_high_temperature(&TorusSpec::new(2, 4).unwrap()), Err(Error::TooLarge(_))));
    }
}
