//! Low-discrepancy point sets in the unit cube.
//!
//! The crate evaluates L2 star, periodic and extreme discrepancies through
//! their closed pairwise forms, computes the exact L∞ star discrepancy, and
//! post-processes point sets with projected ADAM descent on a smoothed L2
//! loss. Classical constructions (Fibonacci, Kronecker lattices, Sobol',
//! uniform random) serve as starting sets.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases at the crate root cover the common case.

pub mod error;
pub mod generators;
pub mod l2;
pub mod linf;
pub mod optimizer;
pub mod point_set;
pub mod scalar;
pub mod sum;

pub use error::{Error, Result};
pub use generators::{
    fibonacci_integration_lattice, fibonacci_set, kronecker_lattice, random_set, sobol_set,
    DirectionTable, SobolParams, GOLDEN_RATIO,
};
pub use l2::{
    l2_extreme_sq, l2_grad, l2_loss_and_grad, l2_loss_smoothed, l2_periodic_sq, l2_star_sq,
    l2_value, quadrature_oracle, sabs, smax, smin, L2Value, Quadrature, QuadratureMethod,
    SmoothingParams,
};
pub use linf::{
    linf_star_2d, linf_star_exact, linf_star_exact_with, GridSlice, LinfOptions, LinfReport,
    DEFAULT_BOX_BUDGET,
};
pub use optimizer::{
    adam_project_step, metric_value, optimize, optimize_with_restarts, random_restart, AbortReason,
    AdamConfig, AdamState, BestIterate, OptimizeReport, RestartReport, Tracking,
};
pub use point_set::{load_point_set, save_point_set, DiscrepancyKind, PointSet};
pub use scalar::Real;

pub type PointSet64 = PointSet<f64>;
pub type PointSet32 = PointSet<f32>;
pub type AdamConfig64 = AdamConfig<f64>;
pub type OptimizeReport64 = OptimizeReport<f64>;
pub type SmoothingParams64 = SmoothingParams<f64>;
pub type L2Value64 = L2Value<f64>;
