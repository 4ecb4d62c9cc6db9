//! Exact small-instance references for every sampler and estimator.
//!
//! - [`srw`]: simple-random-walk kernels `p_n(z)` (box convolution and a single-point
//!   axis decomposition), the random-length walk Green function, and an independent
//!   lattice Green function by Bessel-function quadrature.
//! - [`enumerate`]: exhaustive self-avoiding walks and high-temperature graphs.
//! - [`transfer`]: Ising correlations by transfer matrices.
//! - [`exact`]: rational-arithmetic expectations of RLRW and RLLERW and the walk-sum
//!   identities for their two-point functions.

pub mod enumerate;
pub mod exact;
pub mod srw;
pub mod transfer;

pub use enumerate::{enumerate_high_temperature, enumerate_saw, for_each_saw, HighTempEnumeration, SawEnumeration};
pub use exact::{
    exact_rllerw_expectations, exact_rllerw_law, rlrw_expected_visits, rlrw_walk_sums, survival_from_probabilities,
    ExactTwoPoint, Rational, RllerwExact,
};
pub use srw::{
    lattice_green_function, oracle_rlrw_at, oracle_rlrw_two_point, srw_convolve, srw_point_kernel, OracleValue,
    SrwKernelTable,
};
pub use transfer::ising_correlations_transfer;
