//! The TOML run configuration.
//!
//! Every field that influences a decision must be given explicitly; there
//! are no defaults. The `parse` step only checks syntax and shape, `resolve`
//! validates values and builds the domain types, naming the offending field
//! by its path on failure.

use serde::{Deserialize, Serialize};

use crate::decision::{CandidateOptions, DecisionOptions, MaximalityMode};
use crate::harness::{ExperimentSettings, ImprecisePredictionMethod, Selector, TaskSpec};
use crate::oracle::{OracleConfig, SelectionMode};
use crate::problem::UncertainLp;
use crate::uncertainty::{
    Cdf, Contamination, DiscreteDistribution, FocalCount, Interval, PBox, UncertainScalar,
};
use crate::verify::{InstanceCounts, VerifyConfig};

/// A configuration error tied to a field path such as `problem.y[1][0].hi`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError { path: path.into(), message: message.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RunConfig {
    Solve(SolveConfig),
    Verify(VerifyRunConfig),
    Experiment(ExperimentConfig),
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| err("config", e.message().trim_end()).with_span(text, e.span()))
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        toml::to_string(self).map_err(|e| err("config", e))
    }

    pub fn mode(&self) -> &'static str {
        match self {
            RunConfig::Solve(_) => "solve",
            RunConfig::Verify(_) => "verify",
            RunConfig::Experiment(_) => "experiment",
        }
    }
}

impl ConfigError {
    fn with_span(mut self, text: &str, span: Option<std::ops::Range<usize>>) -> Self {
        if let Some(span) = span {
            let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
            self.path = format!("config (line {line})");
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub decision: DecisionConfig,
    pub problem: ProblemConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionConfig {
    /// Focal elements per p-box entry.
    pub n_focal: usize,
    pub grid_per_axis: usize,
    pub include_vertices: bool,
    pub tie_tol: f64,
    pub maximality: Maximality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Maximality {
    Standard,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub u: Vec<ScalarConfig>,
    /// `m` rows of `n` entries.
    pub y: Vec<Vec<ScalarConfig>>,
    pub z: Vec<ScalarConfig>,
    pub x_bounds: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarConfig {
    Point { value: f64 },
    Interval { lo: f64, hi: f64 },
    Contamination { center: Vec<[f64; 2]>, epsilon: f64, support: [f64; 2] },
    Pbox { support: [f64; 2], lower: CdfConfig, upper: CdfConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdfConfig {
    pub kind: CdfKind,
    /// `(value, probability)` knots with increasing values.
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfKind {
    Step,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyRunConfig {
    /// Overrides the `--seed` flag when present.
    pub seed: Option<u64>,
    pub oracle: Option<OracleSettings>,
    pub counts: Option<CountsConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSettings {
    pub grid_per_axis: usize,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsConfig {
    pub conjugacy: usize,
    pub main_path: usize,
    pub precise_collapse: usize,
    pub contamination: usize,
    pub pbox_refinement: usize,
    pub robust_counterpart: usize,
    pub decision_agreement: usize,
    pub punishment: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub selector: Selector,
    pub decision: DecisionConfig,
    pub task: TaskConfig,
    pub methods: Vec<ImprecisePredictionMethod>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    pub n: usize,
    pub m: usize,
    pub feature_dim: usize,
    pub true_weights: Vec<Vec<f64>>,
    pub noise_scale: f64,
    pub x_bounds: Vec<[f64; 2]>,
    pub train_size: usize,
    pub test_size: usize,
    pub seed: u64,
}

fn interval(path: &str, [lo, hi]: [f64; 2]) -> Result<Interval, ConfigError> {
    Interval::new(lo, hi).map_err(|e| err(path, e))
}

fn bounds(path: &str, raw: &[[f64; 2]]) -> Result<Vec<Interval>, ConfigError> {
    raw.iter()
        .enumerate()
        .map(|(j, b)| {
            let p = format!("{path}[{j}]");
            let iv = interval(&p, *b)?;
            if iv.lo() < 0.0 {
                return Err(err(p, "lower bound must be nonnegative"));
            }
            Ok(iv)
        })
        .collect()
}

impl CdfConfig {
    fn resolve(&self, path: &str) -> Result<Cdf, ConfigError> {
        let pts: Vec<(f64, f64)> = self.points.iter().map(|[v, p]| (*v, *p)).collect();
        match self.kind {
            CdfKind::Step => Cdf::step(pts),
            CdfKind::Linear => Cdf::linear(pts),
        }
        .map_err(|e| err(format!("{path}.points"), e))
    }
}

impl ScalarConfig {
    pub fn resolve(&self, path: &str) -> Result<UncertainScalar, ConfigError> {
        match self {
            ScalarConfig::Point { value } => {
                UncertainScalar::point(*value).map_err(|e| err(format!("{path}.value"), e))
            }
            ScalarConfig::Interval { lo, hi } => Interval::new(*lo, *hi)
                .map(UncertainScalar::Interval)
                .map_err(|e| err(format!("{path}.lo"), e)),
            ScalarConfig::Contamination { center, epsilon, support } => {
                let support = interval(&format!("{path}.support"), *support)?;
                let atoms = center.iter().map(|[v, p]| (*v, *p)).collect();
                let center = DiscreteDistribution::new(atoms).map_err(|e| err(format!("{path}.center"), e))?;
                let c = Contamination::new(center, *epsilon, support).map_err(|e| err(path, e))?;
                Ok(UncertainScalar::Contamination(c))
            }
            ScalarConfig::Pbox { support, lower, upper } => {
                let support = interval(&format!("{path}.support"), *support)?;
                let lower = lower.resolve(&format!("{path}.lower"))?;
                let upper = upper.resolve(&format!("{path}.upper"))?;
                Ok(UncertainScalar::PBox(PBox::new(support, lower, upper).map_err(|e| err(path, e))?))
            }
        }
    }
}

impl ProblemConfig {
    pub fn resolve(&self) -> Result<UncertainLp, ConfigError> {
        let n = self.u.len();
        if n == 0 {
            return Err(err("problem.u", "at least one decision variable is required"));
        }
        if self.y.len() != self.z.len() {
            return Err(err("problem.y", format!("{} rows but {} right-hand sides", self.y.len(), self.z.len())));
        }
        let u = self
            .u
            .iter()
            .enumerate()
            .map(|(j, s)| s.resolve(&format!("problem.u[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut y = Vec::new();
        for (i, row) in self.y.iter().enumerate() {
            if row.len() != n {
                return Err(err(format!("problem.y[{i}]"), format!("expected {n} entries, got {}", row.len())));
            }
            for (j, s) in row.iter().enumerate() {
                y.push(s.resolve(&format!("problem.y[{i}][{j}]"))?);
            }
        }
        let z = self
            .z
            .iter()
            .enumerate()
            .map(|(i, s)| s.resolve(&format!("problem.z[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if self.x_bounds.len() != n {
            return Err(err("problem.x_bounds", format!("expected {n} intervals, got {}", self.x_bounds.len())));
        }
        let b = bounds("problem.x_bounds", &self.x_bounds)?;
        UncertainLp::new(u, y, z, b).map_err(|e| err("problem", e))
    }
}

impl DecisionConfig {
    pub fn resolve(&self, path: &str) -> Result<(CandidateOptions, DecisionOptions), ConfigError> {
        if self.n_focal == 0 {
            return Err(err(format!("{path}.n_focal"), "must be at least 1"));
        }
        if self.grid_per_axis == 0 {
            return Err(err(format!("{path}.grid_per_axis"), "must be at least 1"));
        }
        if !(self.tie_tol >= 0.0 && self.tie_tol.is_finite()) {
            return Err(err(format!("{path}.tie_tol"), format!("must be finite and ≥ 0, got {}", self.tie_tol)));
        }
        let maximality = match self.maximality {
            Maximality::Standard => MaximalityMode::Standard,
            Maximality::Strict => MaximalityMode::Strict,
        };
        Ok((
            CandidateOptions { grid_per_axis: self.grid_per_axis, include_vertices: self.include_vertices },
            DecisionOptions { focal: FocalCount::Uniform(self.n_focal), tie_tol: self.tie_tol, maximality },
        ))
    }
}

impl TaskConfig {
    pub fn resolve(&self) -> Result<TaskSpec, ConfigError> {
        let spec = TaskSpec {
            n: self.n,
            m: self.m,
            feature_dim: self.feature_dim,
            true_weights: self.true_weights.clone(),
            noise_scale: self.noise_scale,
            x_bounds: bounds("task.x_bounds", &self.x_bounds)?,
            train_size: self.train_size,
            test_size: self.test_size,
            seed: self.seed,
        };
        spec.validate().map_err(|e| match e {
            crate::harness::HarnessError::Invalid { field, message } => err(format!("task.{field}"), message),
            other => err("task", other),
        })?;
        Ok(spec)
    }
}

impl ExperimentConfig {
    pub fn resolve(
        &self,
    ) -> Result<(TaskSpec, Vec<ImprecisePredictionMethod>, ExperimentSettings), ConfigError> {
        let spec = self.task.resolve()?;
        if self.methods.is_empty() {
            return Err(err("methods", "at least one method is required"));
        }
        for (k, m) in self.methods.iter().enumerate() {
            m.validate().map_err(|e| match e {
                crate::harness::HarnessError::Invalid { field, message } => {
                    err(format!("methods[{k}].{field}"), message)
                }
                other => err(format!("methods[{k}]"), other),
            })?;
        }
        let (candidates, decision) = self.decision.resolve("decision")?;
        Ok((spec, self.methods.clone(), ExperimentSettings { selector: self.selector, candidates, decision }))
    }
}

impl VerifyRunConfig {
    pub fn resolve(&self, seed: u64) -> Result<VerifyConfig, ConfigError> {
        let mut cfg = VerifyConfig::with_seed(self.seed.unwrap_or(seed));
        if let Some(o) = &self.oracle {
            if o.grid_per_axis < 2 {
                return Err(err("oracle.grid_per_axis", "must be at least 2"));
            }
            cfg.oracle = OracleConfig {
                grid_per_axis: o.grid_per_axis,
                selection: SelectionMode::EndpointsAndGrid,
                budget: o.budget,
                ..cfg.oracle
            };
            cfg.decision_oracle.budget = o.budget;
        }
        if let Some(c) = &self.counts {
            cfg.counts = InstanceCounts {
                conjugacy: c.conjugacy,
                main_path: c.main_path,
                precise_collapse: c.precise_collapse,
                contamination: c.contamination,
                pbox_refinement: c.pbox_refinement,
                robust_counterpart: c.robust_counterpart,
                decision_agreement: c.decision_agreement,
                punishment: c.punishment,
            };
        }
        Ok(cfg)
    }
}
