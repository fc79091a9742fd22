use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::data::{affine, Sample};
use super::HarnessError;
use crate::problem::UncertainLp;
use crate::uncertainty::{Cdf, Contamination, DiscreteDistribution, Interval, PBox, UncertainScalar};

/// Relative singular-value threshold below which the design matrix is
/// treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Least-squares weights per LP parameter, with the training residuals kept
/// for band construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointPredictor {
    pub n: usize,
    pub m: usize,
    /// One row per parameter: intercept, then feature coefficients.
    pub weights: Vec<Vec<f64>>,
    /// One row per parameter: `truth − prediction` on each training sample.
    pub residuals: Vec<Vec<f64>>,
}

impl PointPredictor {
    pub fn predict(&self, features: &[f64]) -> Vec<f64> {
        self.weights.iter().map(|w| affine(w, features)).collect()
    }
}

/// Ordinary least squares for every parameter at once.
pub fn fit_point_predictor(train: &[Sample]) -> Result<PointPredictor, HarnessError> {
    let first = train.first().ok_or(HarnessError::InsufficientData { needed: 1, got: 0 })?;
    let d = first.features.len();
    let (n, m) = (first.truth.n(), first.truth.m());
    if train.len() < d + 1 {
        return Err(HarnessError::InsufficientData { needed: d + 1, got: train.len() });
    }
    let design = DMatrix::from_fn(train.len(), d + 1, |r, c| if c == 0 { 1.0 } else { train[r].features[c - 1] });
    let targets_flat: Vec<Vec<f64>> = train.iter().map(|s| s.truth.to_flat()).collect();
    let p = targets_flat[0].len();
    let targets = DMatrix::from_fn(train.len(), p, |r, c| targets_flat[r][c]);

    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    // also rejects NaN singular values
    if min_sv.partial_cmp(&(RANK_TOL * max_sv)) != Some(std::cmp::Ordering::Greater) {
        return Err(HarnessError::RankDeficient { ratio: min_sv / max_sv });
    }
    let coef = svd.solve(&targets, 0.0).map_err(|e| HarnessError::Numerical(e.to_string()))?;
    let fitted = &design * &coef;
    let weights = (0..p).map(|k| coef.column(k).iter().copied().collect()).collect();
    let residuals = (0..p).map(|k| (0..train.len()).map(|r| targets[(r, k)] - fitted[(r, k)]).collect()).collect();
    Ok(PointPredictor { n, m, weights, residuals })
}

/// How residuals become an imprecise model around each point prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ImprecisePredictionMethod {
    PointOnly,
    /// Central empirical residual quantile band with the given coverage.
    IntervalBand { coverage: f64 },
    /// Dirac at the prediction, contaminated by the full residual range.
    ContaminationBand { epsilon: f64 },
    /// Shifted residual empirical CDF widened by the Kolmogorov–Smirnov band
    /// at level `ks_alpha`.
    #[serde(rename = "pbox_band")]
    PBoxBand { ks_alpha: f64 },
}

impl ImprecisePredictionMethod {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |field: &str, v: f64, range: &str| {
            Err(super::invalid(field, format!("must lie in {range}, got {v}")))
        };
        match *self {
            Self::PointOnly => Ok(()),
            Self::IntervalBand { coverage } if !(coverage > 0.0 && coverage <= 1.0) => {
                bad("coverage", coverage, "(0, 1]")
            }
            Self::ContaminationBand { epsilon } if !(0.0..=1.0).contains(&epsilon) => {
                bad("epsilon", epsilon, "[0, 1]")
            }
            Self::PBoxBand { ks_alpha } if !(ks_alpha > 0.0 && ks_alpha < 1.0) => {
                bad("ks_alpha", ks_alpha, "(0, 1)")
            }
            _ => Ok(()),
        }
    }

    /// Stable display name used in reports.
    pub fn name(&self) -> String {
        match self {
            Self::PointOnly => "point_only".into(),
            Self::IntervalBand { coverage } => format!("interval_band(coverage={coverage})"),
            Self::ContaminationBand { epsilon } => format!("contamination_band(epsilon={epsilon})"),
            Self::PBoxBand { ks_alpha } => format!("pbox_band(ks_alpha={ks_alpha})"),
        }
    }
}

/// Kolmogorov–Smirnov band half-width `sqrt(ln(2/α) / (2N))`.
pub fn ks_half_width(alpha: f64, samples: usize) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * samples as f64)).sqrt()
}

/// Empirical quantile with linear interpolation between order statistics
/// (the usual "type 7" definition). `sorted` must be ascending.
pub fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// The imprecise model of one parameter.
pub fn parameter_model(
    center: f64,
    residuals: &[f64],
    method: &ImprecisePredictionMethod,
) -> Result<UncertainScalar, HarnessError> {
    method.validate()?;
    if !matches!(method, ImprecisePredictionMethod::PointOnly) && residuals.len() < 2 {
        return Err(HarnessError::InsufficientData { needed: 2, got: residuals.len() });
    }
    let r = sorted(residuals);
    let full = || -> Result<Interval, HarnessError> {
        Ok(Interval::new((center + r[0]).min(center), (center + r[r.len() - 1]).max(center))?)
    };
    Ok(match *method {
        ImprecisePredictionMethod::PointOnly => UncertainScalar::point(center)?,
        ImprecisePredictionMethod::IntervalBand { coverage } => {
            let lo = center + empirical_quantile(&r, 0.5 * (1.0 - coverage));
            let hi = center + empirical_quantile(&r, 0.5 * (1.0 + coverage));
            UncertainScalar::Interval(Interval::new(lo, hi)?)
        }
        ImprecisePredictionMethod::ContaminationBand { epsilon } => UncertainScalar::Contamination(
            Contamination::new(DiscreteDistribution::dirac(center)?, epsilon, full()?)?,
        ),
        ImprecisePredictionMethod::PBoxBand { ks_alpha } => {
            UncertainScalar::PBox(residual_pbox(center, &r, ks_alpha, full()?)?)
        }
    })
}

/// Empirical CDF of `center + residuals` shifted up and down by the KS
/// half-width, clipped to `[0, 1]`; the lower bound reaches 1 at the top of
/// the support.
fn residual_pbox(center: f64, sorted: &[f64], alpha: f64, support: Interval) -> Result<PBox, HarnessError> {
    let h = ks_half_width(alpha, sorted.len());
    let count = sorted.len() as f64;
    let mut ecdf: Vec<(f64, f64)> = Vec::new();
    for (k, v) in sorted.iter().enumerate() {
        let x = (center + v).clamp(support.lo(), support.hi());
        let p = (k + 1) as f64 / count;
        match ecdf.last_mut() {
            Some(last) if last.0 == x => last.1 = p,
            _ => ecdf.push((x, p)),
        }
    }
    if ecdf[0].0 > support.lo() {
        ecdf.insert(0, (support.lo(), 0.0));
    }
    if ecdf[ecdf.len() - 1].0 < support.hi() {
        ecdf.push((support.hi(), 1.0));
    }
    let upper: Vec<(f64, f64)> = ecdf.iter().map(|&(x, p)| (x, (p + h).min(1.0))).collect();
    let mut lower: Vec<(f64, f64)> = ecdf.iter().map(|&(x, p)| (x, (p - h).max(0.0))).collect();
    let last = lower.len() - 1;
    lower[last].1 = 1.0;
    Ok(PBox::new(support, Cdf::step(lower)?, Cdf::step(upper)?)?)
}

/// The uncertain LP predicted for one feature vector.
pub fn build_imprecise_prediction(
    predictor: &PointPredictor,
    features: &[f64],
    method: &ImprecisePredictionMethod,
    x_bounds: &[Interval],
) -> Result<UncertainLp, HarnessError> {
    let centers = predictor.predict(features);
    let entries = centers
        .iter()
        .zip(&predictor.residuals)
        .map(|(c, r)| parameter_model(*c, r, method))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UncertainLp::from_entries(predictor.n, predictor.m, entries, x_bounds.to_vec())?)
}
