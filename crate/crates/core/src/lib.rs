//! Walk models on the discrete torus and their unwrapped two-point functions.
//!
//! The crate samples four walk ensembles on `d`-dimensional tori of period `L`:
//!
//! - the variable-length self-avoiding walk ([`samplers::saw`], Berretti–Sokal chain),
//! - the Ising walk extracted from a worm-algorithm high-temperature graph
//!   ([`samplers::worm`], [`samplers::ising_walk`]),
//! - the random-length random walk and its chronological loop erasure
//!   ([`samplers::random_length`]).
//!
//! Walks are lifted back to `Z^d` through the wrapping bijection in [`lattice`], which
//! gives winding numbers and the unwrapped two-point function measured in
//! [`observables`]. [`theory`] evaluates the limiting curves these measurements are
//! compared with, and [`oracles`] holds exact small-instance computations used to
//! check every sampler and estimator. [`cli`] is the batch front end.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod observables;
pub mod oracles;
pub mod rng;
pub mod samplers;
mod site_table;
pub mod theory;

pub use error::{Error, Result};
pub use lattice::{Dim, Lattice, LatticeWalk, Step, TorusSpec, TorusWalk, ZWalk};
