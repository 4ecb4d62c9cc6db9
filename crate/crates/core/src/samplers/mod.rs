//! Samplers for the four walk ensembles on the torus.
//!
//! Every sampler draws from a caller-supplied RNG; reproducibility across chains comes
//! from handing each chain its own [`crate::rng::stream`].

pub mod ising_walk;
pub mod length_law;
pub mod random_length;
pub mod saw;
pub mod worm;

pub use ising_walk::{extract_ising_walk, IsingWalkExtractor};
pub use length_law::LengthLaw;
pub use random_length::{rllerw_sample, rlrw_sample, sample_complete_graph_length, LoopErasedSampler};
pub use saw::{SawMove, SawSampler};
pub use worm::{EdgeConfig, WormMove, WormSampler};
