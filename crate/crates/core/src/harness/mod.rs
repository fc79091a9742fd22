//! Predict-then-optimize experiments.
//!
//! A synthetic task draws feature vectors and the LP parameters they
//! determine, fits a least-squares point predictor, wraps each prediction in
//! an imprecise model built from the training residuals, decides under that
//! model and scores the decision against the true parameters by regret.

mod data;
mod prediction;

pub use data::{generate_dataset, Dataset, Sample, TaskSpec};
pub use prediction::{
    build_imprecise_prediction, empirical_quantile, fit_point_predictor, ks_half_width, parameter_model,
    ImprecisePredictionMethod, PointPredictor, RANK_TOL,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decision::{self, CandidateOptions, CandidateSet, Criteria, DecisionError, DecisionOptions};
use crate::lp::{solve_exact, DeterministicLp, LpError, LpSolution};
use crate::problem::{dot, DecisionVector, ProblemError, Realization};
use crate::uncertainty::{Interval, UncertaintyError};
use crate::TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("need at least {needed} samples or residuals, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("least-squares design matrix is rank deficient (singular value ratio {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("decision beats the true optimum by {0:e}")]
    NegativeRegret(f64),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub(crate) fn invalid(field: &str, message: impl Into<String>) -> HarnessError {
    HarnessError::Invalid { field: field.into(), message: message.into() }
}

/// The deterministic LP at a realization.
pub fn realized_lp(truth: &Realization, x_bounds: &[Interval]) -> Result<DeterministicLp, LpError> {
    let rows = (0..truth.m()).map(|i| truth.row(i).to_vec()).collect();
    DeterministicLp::new(truth.u.clone(), rows, truth.z.clone(), x_bounds.to_vec())
}

/// `optimum − achieved` at the true parameters, where an infeasible decision
/// achieves 0. `None` when the true LP itself is infeasible.
pub fn evaluate_regret(
    decision: &DecisionVector,
    truth: &Realization,
    x_bounds: &[Interval],
) -> Result<Option<f64>, HarnessError> {
    let optimum = match solve_exact(&realized_lp(truth, x_bounds)?)? {
        LpSolution::Optimal { value, .. } => value,
        LpSolution::Infeasible => return Ok(None),
    };
    let x = decision.as_slice();
    let achieved = if decision::is_feasible_at(x, truth) { dot(&truth.u, x) } else { 0.0 };
    let regret = optimum - achieved;
    // a decision feasible only within TOL can beat the optimum by O(TOL)
    if regret < -TOL * (1.0 + optimum.abs()) {
        return Err(HarnessError::NegativeRegret(-regret));
    }
    Ok(Some(regret.max(0.0)))
}

/// How a single action is picked from the decision sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    /// Lexicographically smallest maximin candidate.
    Maximin,
    /// Lexicographically smallest maximal candidate.
    MaximalThenFirst,
}

/// Decision-layer settings shared by every instance of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSettings {
    pub selector: Selector,
    pub candidates: CandidateOptions,
    pub decision: DecisionOptions,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        Self {
            selector: Selector::Maximin,
            candidates: CandidateOptions::default(),
            decision: DecisionOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// The true LP is infeasible, so regret is undefined.
    SkippedInfeasible,
    Error,
}

/// One `(test instance, method)` outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRow {
    pub instance: usize,
    pub method: String,
    pub status: RowStatus,
    pub regret: Option<f64>,
    pub vacuous: Option<bool>,
    pub decision: Option<Vec<f64>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: String,
    /// Instances with a defined regret.
    pub evaluated: usize,
    pub skipped_infeasible: usize,
    pub errors: usize,
    /// `None` when no instance could be evaluated.
    pub mean_regret: Option<f64>,
    pub worst_case_regret: Option<f64>,
    pub vacuous_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    pub seed: u64,
    pub instances: usize,
    pub selector: Selector,
    pub methods: Vec<MethodSummary>,
    pub rows: Vec<InstanceRow>,
}

fn run_one(
    predictor: &PointPredictor,
    sample: &Sample,
    method: &ImprecisePredictionMethod,
    spec: &TaskSpec,
    settings: &ExperimentSettings,
) -> Result<(Option<f64>, bool, Vec<f64>), HarnessError> {
    let problem = build_imprecise_prediction(predictor, &sample.features, method, &spec.x_bounds)?;
    let candidates = CandidateSet::build(&problem, &settings.candidates)?;
    let criteria = match settings.selector {
        Selector::Maximin => Criteria { maximin: true, maximal: false },
        Selector::MaximalThenFirst => Criteria { maximin: false, maximal: true },
    };
    let outcome = decision::decide_with(&problem, &candidates, &settings.decision, criteria)?;
    let chosen = match settings.selector {
        Selector::Maximin => outcome.first_maximin(),
        Selector::MaximalThenFirst => outcome.first_maximal(),
    };
    let regret = evaluate_regret(chosen, &sample.truth, &spec.x_bounds)?;
    Ok((regret, outcome.vacuous, chosen.as_slice().to_vec()))
}

/// Generate data, fit, and score every method on every test instance.
/// Instance failures are recorded as error rows rather than aborting.
pub fn run_experiment(
    spec: &TaskSpec,
    methods: &[ImprecisePredictionMethod],
    settings: &ExperimentSettings,
) -> Result<RegretReport, HarnessError> {
    for m in methods {
        m.validate()?;
    }
    let data = generate_dataset(spec)?;
    let predictor = fit_point_predictor(&data.train)?;
    let rows: Vec<InstanceRow> = data
        .test
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, sample)| {
            let predictor = &predictor;
            methods.iter().map(move |method| {
                let name = method.name();
                match run_one(predictor, sample, method, spec, settings) {
                    Ok((Some(regret), vacuous, x)) => InstanceRow {
                        instance: i,
                        method: name,
                        status: RowStatus::Ok,
                        regret: Some(regret),
                        vacuous: Some(vacuous),
                        decision: Some(x),
                        error: None,
                    },
                    Ok((None, vacuous, x)) => InstanceRow {
                        instance: i,
                        method: name,
                        status: RowStatus::SkippedInfeasible,
                        regret: None,
                        vacuous: Some(vacuous),
                        decision: Some(x),
                        error: None,
                    },
                    Err(e) => InstanceRow {
                        instance: i,
                        method: name,
                        status: RowStatus::Error,
                        regret: None,
                        vacuous: None,
                        decision: None,
                        error: Some(e.to_string()),
                    },
                }
            })
        })
        .collect();
    let methods = methods
        .iter()
        .map(|method| {
            let name = method.name();
            let mine: Vec<&InstanceRow> = rows.iter().filter(|r| r.method == name).collect();
            let regrets: Vec<f64> = mine.iter().filter_map(|r| r.regret).collect();
            let decided: Vec<bool> = mine.iter().filter_map(|r| r.vacuous).collect();
            let evaluated = regrets.len();
            let mean = (evaluated > 0).then(|| regrets.iter().sum::<f64>() / evaluated as f64);
            let worst = regrets.iter().copied().reduce(f64::max);
            let vacuous_rate = (!decided.is_empty())
                .then(|| decided.iter().filter(|v| **v).count() as f64 / decided.len() as f64);
            MethodSummary {
                method: name,
                evaluated,
                skipped_infeasible: mine.iter().filter(|r| r.status == RowStatus::SkippedInfeasible).count(),
                errors: mine.iter().filter(|r| r.status == RowStatus::Error).count(),
                mean_regret: mean,
                worst_case_regret: worst,
                vacuous_rate,
            }
        })
        .collect();
    Ok(RegretReport { seed: spec.seed, instances: spec.test_size, selector: settings.selector, methods, rows })
}

#[cfg(test)]
mod tests;
