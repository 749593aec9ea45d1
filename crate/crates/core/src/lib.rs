//! Even-subalgebra Cl(3,0) kernel and a grade-decomposed correlation harness
//! for a two-party hidden-variable model of the EPR-Bohm experiment.
//!
//! Everything is generic over the floating-point scalar ([`Real`], implemented
//! for `f32` and `f64`); the `*64` aliases below are what the CLI and the
//! acceptance suite use.
//!
//! - [`algebra`]: `EvenMultivector`, the geometric product with an explicit
//!   cross sign, reversal and inverse.
//! - [`model`]: measurement functions, the fair coin and the locality audit.
//! - [`correlation`]: normalized pair values, exact two-point and Monte Carlo
//!   correlations under either product convention.
//! - [`chsh`]: the CHSH string, bound expressions, maximizer and sweeps.

pub mod algebra;
pub mod chsh;
pub mod correlation;
pub mod direction;
pub mod error;
pub mod model;
pub mod rng;
pub mod scalar;
pub mod stats;

pub use algebra::{direction_bivector, geometric_product, Axis, CrossSign, EvenMultivector};
pub use chsh::{
    chsh_report, chsh_s, maximize_s, maximize_s_with, paper_bound, sweep_curve, tsirelson,
    ChshConfig, ChshReport, SearchOptions, SearchResult, SweepPoint,
};
pub use correlation::{
    correlation_exact, correlation_mc, naive_correlation, normalized_pair_value, pair_product,
    CorrelationReport, ProductConvention,
};
pub use direction::Direction;
pub use error::{Error, Result};
pub use model::{
    joint_trial, locality_audit, measure_alice, measure_bob, AuditReport, HiddenVariable, Marginal,
    MeasurementOutcome, Outcome,
};
pub use rng::{sample_lambda, RngStream, RNG_ALGORITHM};
pub use scalar::Real;

pub type Multivector64 = EvenMultivector<f64>;
pub type Multivector32 = EvenMultivector<f32>;
pub type Direction64 = Direction<f64>;
pub type Direction32 = Direction<f32>;
pub type CorrelationReport64 = CorrelationReport<f64>;
pub type ChshConfig64 = ChshConfig<f64>;
pub type ChshReport64 = ChshReport<f64>;
pub type AuditReport64 = AuditReport<f64>;
