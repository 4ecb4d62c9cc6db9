//! Unwrapped two-point function histograms with block-jackknife errors.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Step, TorusSpec};

/// Target number of blocks; the stored count stays in `[K, 2K]` once data exceeds `K`
/// samples.
pub const DEFAULT_BLOCKS: usize = 32;

/// What a sample contributes to the tally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoPointMode {
    /// One count at the unwrapped endpoint; the normalizer counts empty walks.
    Endpoint,
    /// One count per visit of every unwrapped site, start included; the normalizer
    /// counts samples.
    Visit,
}

/// Displacement key: coordinates offset-packed into a `u64` when they fit, else
/// stored in full.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Key {
    Packed(u64),
    Wide(Box<[i64]>),
}

#[derive(Clone, Copy, Debug)]
struct Packing {
    dim: usize,
    bits: u32,
}

impl Packing {
    fn new(dim: usize) -> Self {
        // at most 32 bits per coordinate keeps the offset representable
        Packing { dim, bits: (64 / dim as u32).min(32) }
    }

    fn half(&self) -> i64 {
        1i64 << (self.bits - 1)
    }

    fn key(&self, z: &[i64]) -> Key {
        debug_assert_eq!(z.len(), self.dim);
        let half = self.half();
        if z.iter().all(|&x| (-half..half).contains(&x)) {
            let mut k = 0u64;
            for &x in z {
                k = (k << self.bits) | (x + half) as u64;
            }
            Key::Packed(k)
        } else {
            Key::Wide(z.into())
        }
    }

    fn coords(&self, key: &Key) -> Vec<i64> {
        match key {
            Key::Wide(z) => z.to_vec(),
            Key::Packed(k) => {
                let mask = (1u64 << self.bits) - 1;
                let mut z = vec![0i64; self.dim];
                let mut k = *k;
                for slot in z.iter_mut().rev() {
                    *slot = (k & mask) as i64 - self.half();
                    k >>= self.bits;
                }
                z
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
struct TallyBlock {
    tallies: FxHashMap<Key, f64>,
    normalizer: f64,
    samples: u64,
}

impl TallyBlock {
    fn absorb(&mut self, other: TallyBlock) {
        for (k, v) in other.tallies {
            *self.tallies.entry(k).or_insert(0.0) += v;
        }
        self.normalizer += other.normalizer;
        self.samples += other.samples;
    }
}

/// Estimate of `g̃(z)` or of a sum over a set of displacements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub value: f64,
    /// Delete-one block jackknife error; infinite when some block holds the whole
    /// normalizer.
    pub stderr: f64,
}

/// Estimate at one displacement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointEstimate {
    pub z: Vec<i64>,
    pub value: f64,
    pub stderr: f64,
}

/// Sparse tally of unwrapped displacements over contiguous sample blocks.
///
/// `g̃(z) = Σ tally(z) / Σ normalizer`. Blocks fill in sample order; when their
/// number exceeds `2K` neighbours are merged pairwise and the block capacity doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointHistogram {
    mode: TwoPointMode,
    packing: Packing,
    target_blocks: usize,
    capacity: u64,
    blocks: Vec<TallyBlock>,
}

impl PartialEq for Packing {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
    }
}

impl TwoPointHistogram {
    pub fn new(dim: usize, mode: TwoPointMode) -> Self {
        Self::with_blocks(dim, mode, DEFAULT_BLOCKS)
    }

    pub fn with_blocks(dim: usize, mode: TwoPointMode, target_blocks: usize) -> Self {
        assert!(dim >= 1 && target_blocks >= 2);
        TwoPointHistogram { mode, packing: Packing::new(dim), target_blocks, capacity: 1, blocks: Vec::new() }
    }

    pub fn mode(&self) -> TwoPointMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.packing.dim
    }

    pub fn samples(&self) -> u64 {
        self.blocks.iter().map(|b| b.samples).sum()
    }

    pub fn normalizer(&self) -> f64 {
        self.blocks.iter().map(|b| b.normalizer).sum()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn current(&mut self) -> &mut TallyBlock {
        if self.blocks.last().is_none_or(|b| b.samples >= self.capacity) {
            self.blocks.push(TallyBlock::default());
        }
        self.blocks.last_mut().expect("just pushed")
    }

    fn finish_sample(&mut self) {
        if self.blocks.len() > 2 * self.target_blocks
            && self.blocks.last().is_some_and(|b| b.samples >= self.capacity)
        {
            self.coarsen();
        }
    }

    fn coarsen(&mut self) {
        let old = std::mem::take(&mut self.blocks);
        let mut it = old.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.absorb(b);
            }
            self.blocks.push(a);
        }
        self.capacity *= 2;
    }

    /// Endpoint-mode sample: the unwrapped endpoint `z` of one walk.
    pub fn record_endpoint(&mut self, z: &[i64]) {
        debug_assert_eq!(self.mode, TwoPointMode::Endpoint);
        let key = self.packing.key(z);
        let empty = z.iter().all(|&x| x == 0);
        let b = self.current();
        *b.tallies.entry(key).or_insert(0.0) += 1.0;
        b.normalizer += f64::from(u8::from(empty));
        b.samples += 1;
        self.finish_sample();
    }

    /// Endpoint-mode sample where emptiness is decided by the walk length rather than
    /// the displacement (a closed nonempty walk returns to the origin).
    pub fn record_endpoint_of(&mut self, z: &[i64], walk_is_empty: bool) {
        let key = self.packing.key(z);
        let b = self.current();
        *b.tallies.entry(key).or_insert(0.0) += 1.0;
        b.normalizer += f64::from(u8::from(walk_is_empty));
        b.samples += 1;
        self.finish_sample();
    }

    /// Visit-mode sample: every site of the unwrapped walk with these steps, started
    /// at the origin.
    pub fn record_visits(&mut self, steps: &[Step]) {
        debug_assert_eq!(self.mode, TwoPointMode::Visit);
        let packing = self.packing;
        let mut z = vec![0i64; packing.dim];
        let b = self.current();
        *b.tallies.entry(packing.key(&z)).or_insert(0.0) += 1.0;
        for s in steps {
            z[s.axis()] += s.sign();
            *b.tallies.entry(packing.key(&z)).or_insert(0.0) += 1.0;
        }
        b.normalizer += 1.0;
        b.samples += 1;
        self.finish_sample();
    }

    /// One sample with arbitrary tallies and normalizer weight.
    pub fn record_weighted<'a>(&mut self, tallies: impl IntoIterator<Item = (&'a [i64], f64)>, normalizer: f64) {
        let packing = self.packing;
        let b = self.current();
        for (z, w) in tallies {
            *b.tallies.entry(packing.key(z)).or_insert(0.0) += w;
        }
        b.normalizer += normalizer;
        b.samples += 1;
        self.finish_sample();
    }

    /// Appends another histogram's blocks after this one's.
    pub fn merge(&mut self, other: &TwoPointHistogram) -> Result<()> {
        if other.packing.dim != self.packing.dim || other.mode != self.mode {
            return Err(Error::param("cannot merge two-point histograms of different dimension or mode"));
        }
        self.blocks.extend(other.blocks.iter().cloned());
        self.capacity = self.capacity.max(other.capacity);
        while self.blocks.len() > 2 * self.target_blocks {
            self.coarsen();
        }
        Ok(())
    }

    fn check_normalizer(&self) -> Result<f64> {
        let n = self.normalizer();
        if n <= 0.0 {
            let what = match self.mode {
                TwoPointMode::Endpoint => "no empty walks were sampled",
                TwoPointMode::Visit => "no samples",
            };
            return Err(Error::InsufficientData(format!("two-point normalizer is zero: {what}")));
        }
        Ok(n)
    }

    fn jackknife(&self, per_block: &[f64], total_norm: f64) -> RatioEstimate {
        let total: f64 = per_block.iter().sum();
        let value = total / total_norm;
        let nb = self.blocks.len();
        if nb < 2 {
            return RatioEstimate { value, stderr: f64::INFINITY };
        }
        let loo: Vec<f64> = self
            .blocks
            .iter()
            .zip(per_block)
            .map(|(b, &t)| {
                let n = total_norm - b.normalizer;
                if n > 0.0 {
                    (total - t) / n
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        if loo.iter().any(|x| !x.is_finite()) {
            return RatioEstimate { value, stderr: f64::INFINITY };
        }
        let mean = loo.iter().sum::<f64>() / nb as f64;
        let var = loo.iter().map(|x| (x - mean).powi(2)).sum::<f64>() * (nb - 1) as f64 / nb as f64;
        RatioEstimate { value, stderr: var.sqrt() }
    }

    /// `g̃(z)`.
    pub fn estimate(&self, z: &[i64]) -> Result<RatioEstimate> {
        self.estimate_sum(std::slice::from_ref(&z.to_vec()))
    }

    /// `Σ_{z ∈ set} g̃(z)` with a joint jackknife error.
    pub fn estimate_sum(&self, set: &[Vec<i64>]) -> Result<RatioEstimate> {
        let norm = self.check_normalizer()?;
        let keys: Vec<Key> = set.iter().map(|z| self.packing.key(z)).collect();
        let per_block: Vec<f64> =
            self.blocks.iter().map(|b| keys.iter().filter_map(|k| b.tallies.get(k)).sum()).collect();
        Ok(self.jackknife(&per_block, norm))
    }

    /// Estimates at every displacement with a nonzero tally, in lexicographic order.
    pub fn estimates(&self) -> Result<Vec<PointEstimate>> {
        let norm = self.check_normalizer()?;
        let mut keys: Vec<&Key> = Vec::new();
        let mut seen = rustc_hash::FxHashSet::default();
        for b in &self.blocks {
            for k in b.tallies.keys() {
                if seen.insert(k) {
                    keys.push(k);
                }
            }
        }
        let mut out: Vec<PointEstimate> = keys
            .into_iter()
            .map(|k| {
                let per_block: Vec<f64> = self.blocks.iter().map(|b| b.tallies.get(k).copied().unwrap_or(0.0)).collect();
                let e = self.jackknife(&per_block, norm);
                PointEstimate { z: self.packing.coords(k), value: e.value, stderr: e.stderr }
            })
            .collect();
        out.sort_by(|a, b| a.z.cmp(&b.z));
        Ok(out)
    }

    /// Total tally per displacement, summed over blocks.
    pub fn tallies(&self) -> Vec<(Vec<i64>, f64)> {
        let mut acc: FxHashMap<&Key, f64> = FxHashMap::default();
        for b in &self.blocks {
            for (k, v) in &b.tallies {
                *acc.entry(k).or_insert(0.0) += v;
            }
        }
        let mut out: Vec<(Vec<i64>, f64)> = acc.into_iter().map(|(k, v)| (self.packing.coords(k), v)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Largest Euclidean norm among displacements with a nonzero tally.
    pub fn max_norm(&self) -> f64 {
        self.tallies().iter().map(|(z, _)| crate::lattice::euclidean_norm(z)).fold(0.0, f64::max)
    }

    /// The same histogram with displacements reduced onto the torus, i.e. the
    /// torus two-point function obtained by summing over windings.
    pub fn folded(&self, spec: &TorusSpec) -> Result<TwoPointHistogram> {
        if spec.dim_usize() != self.packing.dim {
            return Err(Error::param("fold: dimension mismatch"));
        }
        let mut out = self.clone();
        for b in &mut out.blocks {
            let mut folded: FxHashMap<Key, f64> = FxHashMap::default();
            for (k, v) in b.tallies.drain() {
                let z = spec.reduce_site(&self.packing.coords(&k));
                *folded.entry(self.packing.key(&z)).or_insert(0.0) += v;
            }
            b.tallies = folded;
        }
        Ok(out)
    }
}

/// `g̃(z)` at every observed displacement for the endpoint (SAW, Ising) convention.
pub fn unwrapped_two_point(hist: &TwoPointHistogram) -> Result<Vec<PointEstimate>> {
    if hist.mode() != TwoPointMode::Endpoint {
        return Err(Error::param("unwrapped_two_point expects an endpoint-mode histogram"));
    }
    hist.estimates()
}

/// Expected visit counts for the random-length walks.
pub fn rllerw_visit_two_point(hist: &TwoPointHistogram) -> Result<Vec<PointEstimate>> {
    if hist.mode() != TwoPointMode::Visit {
        return Err(Error::param("rllerw_visit_two_point expects a visit-mode histogram"));
    }
    hist.estimates()
}
