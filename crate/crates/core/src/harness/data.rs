use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{invalid, HarnessError};
use crate::problem::Realization;
use crate::uncertainty::Interval;

/// A synthetic predict-then-optimize task: every LP parameter is a noisy
/// affine function of a feature vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskSpec {
    pub n: usize,
    pub m: usize,
    pub feature_dim: usize,
    /// One row per LP parameter (`u`, then `y` row-major, then `z`); each row
    /// holds the intercept followed by `feature_dim` coefficients.
    pub true_weights: Vec<Vec<f64>>,
    pub noise_scale: f64,
    pub x_bounds: Vec<Interval>,
    pub train_size: usize,
    pub test_size: usize,
    pub seed: u64,
}

impl TaskSpec {
    pub fn parameter_count(&self) -> usize {
        self.n + self.m * self.n + self.m
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n == 0 {
            return Err(invalid("n", "at least one decision variable is required"));
        }
        let p = self.parameter_count();
        if self.true_weights.len() != p {
            return Err(invalid(
                "true_weights",
                format!("expected {p} rows (n + m·n + m), got {}", self.true_weights.len()),
            ));
        }
        if let Some(k) = self.true_weights.iter().position(|r| r.len() != self.feature_dim + 1) {
            return Err(invalid(
                "true_weights",
                format!("row {k} needs {} entries (intercept plus features)", self.feature_dim + 1),
            ));
        }
        if self.true_weights.iter().flatten().any(|w| !w.is_finite()) {
            return Err(invalid("true_weights", "weights must be finite"));
        }
        if !(self.noise_scale >= 0.0 && self.noise_scale.is_finite()) {
            return Err(invalid("noise_scale", format!("must be finite and ≥ 0, got {}", self.noise_scale)));
        }
        if self.x_bounds.len() != self.n {
            return Err(invalid("x_bounds", format!("expected {} intervals, got {}", self.n, self.x_bounds.len())));
        }
        if self.x_bounds.iter().any(|b| b.lo() < 0.0) {
            return Err(invalid("x_bounds", "lower bounds must be nonnegative"));
        }
        if self.train_size < self.feature_dim + 1 {
            return Err(invalid(
                "train_size",
                format!("least squares needs at least {} samples, got {}", self.feature_dim + 1, self.train_size),
            ));
        }
        if self.test_size == 0 {
            return Err(invalid("test_size", "at least one test instance is required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub truth: Realization,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
}

/// Affine map `w₀ + Σ w_k f_k`.
pub(crate) fn affine(weights: &[f64], features: &[f64]) -> f64 {
    weights[0] + weights[1..].iter().zip(features).map(|(w, f)| w * f).sum::<f64>()
}

/// Draw the training and test samples. Features are uniform on the unit
/// cube; each parameter is its affine mean plus scaled standard-normal noise.
/// Afterwards every `z_i` is raised where needed so that one tenth of the
/// box center stays feasible.
pub fn generate_dataset(spec: &TaskSpec) -> Result<Dataset, HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let anchor: Vec<f64> = spec.x_bounds.iter().map(|b| 0.1 * b.mid()).collect();
    let (n, m) = (spec.n, spec.m);
    let draw = |rng: &mut ChaCha8Rng| {
        let features: Vec<f64> = (0..spec.feature_dim).map(|_| rng.random_range(0.0..1.0)).collect();
        let mut flat: Vec<f64> = spec
            .true_weights
            .iter()
            .map(|w| {
                let noise: f64 = rng.sample(StandardNormal);
                affine(w, &features) + spec.noise_scale * noise
            })
            .collect();
        for i in 0..m {
            let row = &flat[n + i * n..n + (i + 1) * n];
            let need: f64 = row.iter().zip(&anchor).map(|(a, b)| a * b).sum();
            let z = &mut flat[n + m * n + i];
            if *z < need {
                *z = need;
            }
        }
        Sample { features, truth: Realization::from_flat(n, m, &flat) }
    };
    let train = (0..spec.train_size).map(|_| draw(&mut rng)).collect();
    let test = (0..spec.test_size).map(|_| draw(&mut rng)).collect();
    Ok(Dataset { train, test })
}
