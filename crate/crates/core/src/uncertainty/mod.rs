//! Imprecise uncertainty models for scalar parameters and their lower/upper
//! expectations.
//!
//! Every model is reduced to a finite [`DsStructure`] (focal intervals with
//! masses). Joint models over several parameters combine the per-entry
//! structures under random-set independence: the mass of a joint focal box is
//! the product of the entry masses and the box is the Cartesian product of the
//! focal intervals. The lower expectation of `f` is then
//!
//! ```text
//! E̲[f] = Σ_boxes mass(box) · min_{v ∈ box} f(v)
//! ```
//!
//! with the box minimum taken by the strategy in the [`EvaluationPlan`].

mod cdf;
mod discrete;
mod ds;
mod expectation;
mod interval;
mod models;

pub use cdf::Cdf;
pub use discrete::{expectation_precise, DiscreteDistribution};
pub use ds::DsStructure;
pub use expectation::{
    lower_expectation, upper_expectation, BoxStrategy, EvaluationPlan, FocalCount, Monotonicity,
    DEFAULT_GRID_POINTS, DEFAULT_N_FOCAL,
};
pub use interval::Interval;
pub(crate) use expectation::advance as advance_index;
pub use models::{to_ds, Contamination, JointModel, PBox, UncertainScalar};

use thiserror::Error;

/// Tolerance on probability masses summing to one.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UncertaintyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("function is unbounded: evaluated to {value} at {point:?}")]
    Unbounded { value: f64, point: Vec<f64> },
}

pub(crate) fn invalid(msg: impl Into<String>) -> UncertaintyError {
    UncertaintyError::InvalidArgument(msg.into())
}
