//! Reproducible, disjoint random streams for independent chains.
//!
//! ChaCha is a counter-based generator: the 64-bit stream id selects an independent
//! keystream for the same key, so `(global_seed, chain_index)` maps to a stream that
//! never overlaps another chain's and is bit-identical across runs and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ChainRng = ChaCha8Rng;

pub fn stream(global_seed: u64, chain_index: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(global_seed);
    rng.set_stream(chain_index);
    rng
}

/// Stream id for chain `chain` of the `size_index`-th system size in a run.
pub fn chain_stream_id(size_index: usize, chain: usize) -> u64 {
    ((size_index as u64) << 32) | chain as u64
}
