use serde::Serialize;

use super::{invalid, UncertaintyError, MASS_TOL};

/// A finitely supported probability distribution with strictly increasing
/// atom values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteDistribution {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, UncertaintyError> {
        if atoms.is_empty() {
            return Err(invalid("distribution needs at least one atom"));
        }
        let mut total = 0.0;
        for (k, &(v, p)) in atoms.iter().enumerate() {
            if !v.is_finite() || !p.is_finite() {
                return Err(invalid(format!("atom {k} is not finite: ({v}, {p})")));
            }
            if p < 0.0 {
                return Err(invalid(format!("atom {k} has negative probability {p}")));
            }
            if k > 0 && atoms[k - 1].0 >= v {
                return Err(invalid(format!(
                    "atom values must be strictly increasing (atom {k}: {} >= {v})",
                    atoms[k - 1].0
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > MASS_TOL {
            return Err(invalid(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self { atoms })
    }

    pub fn dirac(v: f64) -> Result<Self, UncertaintyError> {
        Self::new(vec![(v, 1.0)])
    }

    /// Equal weights on the given (strictly increasing) values.
    pub fn uniform(values: &[f64]) -> Result<Self, UncertaintyError> {
        if values.is_empty() {
            return Err(invalid("distribution needs at least one atom"));
        }
        let p = 1.0 / values.len() as f64;
        Self::new(values.iter().map(|&v| (v, p)).collect())
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn min_value(&self) -> f64 {
        self.atoms[0].0
    }

    pub fn max_value(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].0
    }

    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(v, p)| p * f(v)).sum()
    }
}

/// `Σ p·f(v)` over the atoms of `dist`.
pub fn expectation_precise(dist: &DiscreteDistribution, f: impl Fn(f64) -> f64) -> f64 {
    dist.expectation(f)
}
