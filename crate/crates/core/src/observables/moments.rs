//! Streaming moments with blocking (binning) error analysis.

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of stored blocks that triggers pairwise coarsening.
const MAX_BLOCKS: usize = 1 << 14;

/// Fewest blocks for which an error bar is reported.
pub const MIN_BLOCKS: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Block {
    sum: f64,
    sum_sq: f64,
}

/// Mean and variance by Welford's update, plus block sums of `x` and `x²` over
/// contiguous blocks of equal size for autocorrelation-aware error bars.
///
/// Block size starts at 1 and doubles (merging neighbours) whenever the block count
/// reaches a fixed cap. Only complete blocks enter the blocking analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
    block_size: u64,
    blocks: Vec<Block>,
    partial: Block,
    partial_len: u64,
}

impl Default for MomentAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

/// Result of [`MomentAccumulator::blocking_errors`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockingResult {
    pub mean: f64,
    pub stderr: f64,
    /// `stderr² / (2 naive_stderr²)`; 1/2 for uncorrelated data.
    pub tau_int: f64,
    pub naive_stderr: f64,
    /// Samples per block at the chosen level.
    pub block_size: u64,
    pub blocks: usize,
    /// Whether successive levels agreed within their errors.
    pub plateau: bool,
}

impl MomentAccumulator {
    pub fn new() -> Self {
        MomentAccumulator {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            block_size: 1,
            blocks: Vec::new(),
            partial: Block::default(),
            partial_len: 0,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        self.partial.sum += x;
        self.partial.sum_sq += x * x;
        self.partial_len += 1;
        if self.partial_len == self.block_size {
            self.blocks.push(std::mem::take(&mut self.partial));
            self.partial_len = 0;
            if self.blocks.len() == MAX_BLOCKS {
                self.coarsen();
            }
        }
    }

    fn coarsen(&mut self) {
        let pairs = self.blocks.len() / 2;
        for i in 0..pairs {
            let (a, b) = (self.blocks[2 * i], self.blocks[2 * i + 1]);
            self.blocks[i] = Block { sum: a.sum + b.sum, sum_sq: a.sum_sq + b.sum_sq };
        }
        if self.blocks.len() % 2 == 1 {
            // an odd trailing block becomes the start of the next partial block
            let last = self.blocks[self.blocks.len() - 1];
            self.partial.sum += last.sum;
            self.partial.sum_sq += last.sum_sq;
            self.partial_len += self.block_size;
        }
        self.blocks.truncate(pairs);
        self.block_size *= 2;
    }

    /// Appends another accumulator's stream after this one.
    ///
    /// Moments combine exactly (Chan et al.); blocks are brought to a common size and
    /// concatenated, dropping this accumulator's incomplete trailing block from the
    /// blocking analysis.
    pub fn merge(&mut self, other: &MomentAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);

        let mut theirs = other.clone();
        while self.block_size < theirs.block_size {
            self.coarsen_dropping_odd();
        }
        while theirs.block_size < self.block_size {
            theirs.coarsen_dropping_odd();
        }
        self.blocks.extend_from_slice(&theirs.blocks);
        self.partial = theirs.partial;
        self.partial_len = theirs.partial_len;
        if self.blocks.len() >= MAX_BLOCKS {
            self.coarsen_dropping_odd();
        }
    }

    // Coarsening used by merge: the odd trailing block and the partial block are
    // dropped from the blocking analysis (the moments keep them).
    fn coarsen_dropping_odd(&mut self) {
        self.partial = Block::default();
        self.partial_len = 0;
        if self.blocks.len() % 2 == 1 {
            self.blocks.pop();
        }
        self.coarsen();
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with `n - 1` denominator (0 for fewer than two samples).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Block means at the stored resolution.
    pub fn block_means(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.sum / self.block_size as f64).collect()
    }

    /// Standard error of the mean from block means at doubling block sizes, taken at
    /// the first level that agrees within twice its error with every coarser level
    /// that still has at least 16 blocks.
    pub fn blocking_errors(&self) -> Result<BlockingResult> {
        if self.blocks.len() < MIN_BLOCKS {
            return Err(Error::InsufficientData(format!(
                "{} complete blocks of {} samples; need at least {MIN_BLOCKS}",
                self.blocks.len(),
                self.block_size
            )));
        }
        let naive = (self.variance() / self.count as f64).sqrt();
        let mut means = self.block_means();
        let mut size = self.block_size;
        let mut levels: Vec<(u64, usize, f64)> = Vec::new();
        while means.len() >= MIN_BLOCKS {
            let nb = means.len();
            let m = means.iter().sum::<f64>() / nb as f64;
            let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (nb - 1) as f64;
            levels.push((size, nb, (var / nb as f64).sqrt()));
            means = means.chunks_exact(2).map(|c| 0.5 * (c[0] + c[1])).collect();
            size *= 2;
        }
        let err = |nb: usize, se: f64| se / (2.0 * (nb as f64 - 1.0)).sqrt();
        let chosen = (0..levels.len()).find(|&k| {
            let (_, _, se_k) = levels[k];
            levels[k + 1..]
                .iter()
                .filter(|(_, nb, _)| *nb >= 16)
                .all(|&(_, nb, se)| (se - se_k).abs() <= 2.0 * err(nb, se))
                && levels[k + 1..].iter().any(|(_, nb, _)| *nb >= 16)
        });
        let plateau = chosen.is_some();
        let k = chosen.unwrap_or(levels.len() - 1);
        let (block_size, blocks, stderr) = levels[k];
        let tau_int = if naive > 0.0 { stderr * stderr / (2.0 * naive * naive) } else { 0.5 };
        Ok(BlockingResult { mean: self.mean, stderr, tau_int, naive_stderr: naive, block_size, blocks, plateau })
    }

    /// `f(mean, variance)` on the full sample with a delete-one block jackknife error.
    pub fn jackknife(&self, f: impl Fn(f64, f64) -> f64) -> Result<(f64, f64)> {
        if self.blocks.len() < MIN_BLOCKS {
            return Err(Error::InsufficientData(format!("{} blocks for a jackknife estimate", self.blocks.len())));
        }
        let nb = self.blocks.len();
        let per = self.block_size as f64;
        let (s1, s2) = self.blocks.iter().fold((0.0, 0.0), |(a, b), x| (a + x.sum, b + x.sum_sq));
        let moments = |s1: f64, s2: f64, n: f64| {
            let m = s1 / n;
            (m, ((s2 - n * m * m) / (n - 1.0)).max(0.0))
        };
        let loo: Vec<f64> = self
            .blocks
            .iter()
            .map(|b| {
                let (m, v) = moments(s1 - b.sum, s2 - b.sum_sq, per * (nb - 1) as f64);
                f(m, v)
            })
            .collect();
        let mean_loo = loo.iter().sum::<f64>() / nb as f64;
        let var = loo.iter().map(|r| (r - mean_loo).powi(2)).sum::<f64>() * (nb - 1) as f64 / nb as f64;
        Ok((f(self.mean, self.variance()), var.sqrt()))
    }

    /// `E(x) / sd(x)` with its jackknife error.
    pub fn mean_over_sd(&self) -> Result<(f64, f64)> {
        self.jackknife(|m, v| m / v.sqrt())
    }
}
