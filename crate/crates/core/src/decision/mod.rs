//! Decision making for the uncertain LP over a finite candidate set.
//!
//! The LP is recast as choosing `x` to maximize the utility `G_x`, which pays
//! the objective `uᵀx` when `x` is feasible at the realization and the
//! punishment `L` otherwise. Two criteria are provided:
//!
//! - **maximin**: candidates maximizing the lower expected utility `E̲[G_x]`;
//! - **maximality**: candidates `x` with `E̅[G_x − G_x'] ≥ 0` for every other
//!   candidate `x'`, i.e. not dominated by any alternative.
//!
//! Every maximin candidate is maximal.

mod candidates;
mod evaluation;
mod utility;

pub use candidates::{
    Candidate, CandidateOptions, CandidateSet, Provenance, DEFAULT_GRID_PER_AXIS, DUPLICATE_TOL,
};
pub use evaluation::DiscretizedLp;
pub use utility::{choose_punishment, is_feasible_at, utility};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lp::LpError;
use crate::problem::{DecisionVector, ProblemError, UncertainLp};
use crate::uncertainty::{FocalCount, UncertaintyError};
use crate::TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecisionError {
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("candidates {first} and {second} coincide")]
    DuplicateCandidate { first: usize, second: usize },
    #[error("no candidate has a strictly positive guaranteed objective; no punishment L exists")]
    NoPositiveCandidate,
    #[error("punishment must be positive and finite, got {0}")]
    InvalidPunishment(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Which maximality condition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximalityMode {
    /// `x` is kept when `E̅[G_x − G_x'] ≥ −tol` for every `x'`.
    #[default]
    Standard,
    /// `x` is kept only when `E̅[G_x − G_x'] > tol` for every other `x'`.
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionOptions {
    pub focal: FocalCount,
    pub tie_tol: f64,
    pub maximality: MaximalityMode,
}

impl Default for DecisionOptions {
    fn default() -> Self {
        Self { focal: FocalCount::default(), tie_tol: TOL, maximality: MaximalityMode::Standard }
    }
}

/// `E̲[G_x]` for a single decision.
pub fn lower_utility(
    problem: &UncertainLp,
    x: &DecisionVector,
    punishment: f64,
    focal: &FocalCount,
) -> Result<f64, DecisionError> {
    Ok(DiscretizedLp::new(problem, focal)?.lower_utility(x, punishment))
}

/// `E̅[G_x]` for a single decision.
pub fn upper_utility(
    problem: &UncertainLp,
    x: &DecisionVector,
    punishment: f64,
    focal: &FocalCount,
) -> Result<f64, DecisionError> {
    Ok(DiscretizedLp::new(problem, focal)?.upper_utility(x, punishment))
}

fn check_punishment(punishment: f64) -> Result<(), DecisionError> {
    if punishment > 0.0 && punishment.is_finite() {
        Ok(())
    } else {
        Err(DecisionError::InvalidPunishment(punishment))
    }
}

/// Indices of the candidates whose lower utility is within `tie_tol` of the
/// best, in candidate order.
pub fn maximin_decisions(
    problem: &UncertainLp,
    candidates: &CandidateSet,
    punishment: f64,
    tie_tol: f64,
    focal: &FocalCount,
) -> Result<Vec<usize>, DecisionError> {
    check_punishment(punishment)?;
    let disc = DiscretizedLp::new(problem, focal)?;
    let lower: Vec<f64> = candidates.as_slice().par_iter().map(|c| disc.lower_utility(&c.x, punishment)).collect();
    Ok(argmax_set(&lower, tie_tol))
}

/// Indices of the maximal candidates, in candidate order.
pub fn maximal_decisions(
    problem: &UncertainLp,
    candidates: &CandidateSet,
    punishment: f64,
    options: &DecisionOptions,
) -> Result<Vec<usize>, DecisionError> {
    check_punishment(punishment)?;
    let disc = DiscretizedLp::new(problem, &options.focal)?;
    Ok(maximal_with(&disc, candidates, punishment, options))
}

fn maximal_with(
    disc: &DiscretizedLp,
    candidates: &CandidateSet,
    punishment: f64,
    options: &DecisionOptions,
) -> Vec<usize> {
    let c = candidates.as_slice();
    let keep: Vec<bool> = (0..c.len())
        .into_par_iter()
        .map(|i| {
            (0..c.len()).filter(|&k| k != i).all(|k| {
                let diff = disc.upper_difference(&c[i].x, &c[k].x, punishment);
                match options.maximality {
                    MaximalityMode::Standard => diff >= -options.tie_tol,
                    MaximalityMode::Strict => diff > options.tie_tol,
                }
            })
        })
        .collect();
    (0..c.len()).filter(|&i| keep[i]).collect()
}

pub(crate) fn argmax_set(values: &[f64], tie_tol: f64) -> Vec<usize> {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len()).filter(|&i| values[i] >= best - tie_tol).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub x: DecisionVector,
    pub provenance: Provenance,
    pub lower_utility: f64,
    pub upper_utility: f64,
    pub maximin: bool,
    pub maximal: bool,
}

/// Both criteria evaluated over a (filtered) candidate set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionOutcome {
    pub punishment: f64,
    /// Every candidate's lower utility equals the punishment: nothing is
    /// robustly feasible, so maximin cannot discriminate.
    pub vacuous: bool,
    pub maximality_mode: MaximalityMode,
    pub maximin_set: Vec<DecisionVector>,
    pub maximal_set: Vec<DecisionVector>,
    pub maximin_indices: Vec<usize>,
    pub maximal_indices: Vec<usize>,
    /// Candidates removed for a nonpositive guaranteed objective.
    pub filtered_out: usize,
    pub candidates: Vec<CandidateReport>,
}

impl DecisionOutcome {
    /// Maximin candidate with the lexicographically smallest coordinates.
    pub fn first_maximin(&self) -> &DecisionVector {
        first_lexicographic(&self.maximin_set)
    }

    /// Maximal candidate with the lexicographically smallest coordinates.
    pub fn first_maximal(&self) -> &DecisionVector {
        first_lexicographic(&self.maximal_set)
    }
}

fn first_lexicographic(set: &[DecisionVector]) -> &DecisionVector {
    set.iter()
        .min_by(|a, b| crate::lp::lex_cmp(a.as_slice(), b.as_slice()))
        .expect("decision sets are nonempty")
}

/// Which criteria [`decide`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criteria {
    pub maximin: bool,
    pub maximal: bool,
}

impl Criteria {
    pub const BOTH: Criteria = Criteria { maximin: true, maximal: true };
}

/// Filter the candidates, choose the punishment and evaluate both criteria.
pub fn decide(
    problem: &UncertainLp,
    candidates: &CandidateSet,
    options: &DecisionOptions,
) -> Result<DecisionOutcome, DecisionError> {
    decide_with(problem, candidates, options, Criteria::BOTH)
}

/// As [`decide`], skipping the maximality pass when not requested (the
/// maximal set is then left empty).
pub fn decide_with(
    problem: &UncertainLp,
    candidates: &CandidateSet,
    options: &DecisionOptions,
    criteria: Criteria,
) -> Result<DecisionOutcome, DecisionError> {
    let kept = candidates.retain_positive(problem)?;
    let filtered_out = candidates.len() - kept.len();
    let punishment = choose_punishment(problem, &kept)?;
    let disc = DiscretizedLp::new(problem, &options.focal)?;
    let c = kept.as_slice();
    let utilities: Vec<(f64, f64)> = c
        .par_iter()
        .map(|cand| (disc.lower_utility(&cand.x, punishment), disc.upper_utility(&cand.x, punishment)))
        .collect();
    let lower: Vec<f64> = utilities.iter().map(|u| u.0).collect();
    let maximin = argmax_set(&lower, options.tie_tol);
    let vacuous = lower.iter().all(|l| (l - punishment).abs() <= options.tie_tol);
    let maximal = if criteria.maximal {
        maximal_with(&disc, &kept, punishment, options)
    } else {
        Vec::new()
    };
    let candidates = c
        .iter()
        .zip(&utilities)
        .enumerate()
        .map(|(i, (cand, &(lo, hi)))| CandidateReport {
            x: cand.x.clone(),
            provenance: cand.provenance,
            lower_utility: lo,
            upper_utility: hi,
            maximin: maximin.contains(&i),
            maximal: maximal.contains(&i),
        })
        .collect();
    Ok(DecisionOutcome {
        punishment,
        vacuous,
        maximality_mode: options.maximality,
        maximin_set: maximin.iter().map(|&i| c[i].x.clone()).collect(),
        maximal_set: maximal.iter().map(|&i| c[i].x.clone()).collect(),
        maximin_indices: maximin,
        maximal_indices: maximal,
        filtered_out,
        candidates,
    })
}
