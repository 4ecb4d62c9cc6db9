//! Limit laws and asymptotic two-point curves.
//!
//! - [`laws`]: the half-normal family, `F`, `φ` and the [`LimitLaw`] abstraction for
//!   diffusive-scale length laws `G`.
//! - [`prop1`]: the limit of `‖z‖^{d-2} g(z)` for a random-length walk and the
//!   collapse family `H_d`.
//! - [`kernel`]: the Gaussian kernel `p̄_n` and local-CLT error sums.
//! - [`quadrature`]: the adaptive integrator behind all of the above.

pub mod kernel;
pub mod laws;
pub mod prop1;
pub mod quadrature;

pub use kernel::{gaussian_pbar, lemma_sums, LemmaSums};
pub use laws::{
    half_normal_cdf, half_normal_moments, phi_constant, standardized_f, Affine, FnLaw, HalfNormal,
    InfiniteLength, LimitLaw, PointMass, StandardizedHalfNormal,
};
pub use prop1::{
    fit_amplitude, h_d, h_d_with, point_mass_closed_form, prefactor, prop1_integral, prop1_rhs,
    srw_limit_constant, CollapseParams,
};
pub use quadrature::{Estimate, Tolerance};
