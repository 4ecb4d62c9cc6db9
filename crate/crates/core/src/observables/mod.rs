//! Estimators: moments with blocking errors, walk-length ECDFs, unwrapped two-point
//! histograms, radial profiles and power-law fits.
//!
//! Every accumulator supports `merge`, which appends another chain's stream; merging
//! chains in index order gives results independent of thread scheduling.

pub mod ecdf;
pub mod fit;
pub mod moments;
pub mod profile;
pub mod record;
pub mod two_point;

pub use ecdf::{EcdfAccumulator, EcdfPoint};
pub use fit::{cutoff_sweep, fit_power_law, PowerLawFit, ScalingPoint};
pub use moments::{BlockingResult, MomentAccumulator};
pub use profile::{radial_profile, xi_of, ProfileMode, ProfilePoint};
pub use record::{WalkObservables, WindingRecord};
pub use two_point::{
    rllerw_visit_two_point, unwrapped_two_point, PointEstimate, RatioEstimate, TwoPointHistogram, TwoPointMode,
};
