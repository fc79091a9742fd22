//! The uncertain linear program `max Uᵀx s.t. Yx ≤ Z, x ≥ 0, x in a box`.
//!
//! Parameters are flattened in a fixed order shared by every module: the `n`
//! objective coefficients, then the `m × n` constraint matrix row by row, then
//! the `m` right-hand sides.

use serde::Serialize;
use thiserror::Error;

use crate::uncertainty::{Interval, JointModel, UncertainScalar, UncertaintyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ProblemError {
    ProblemError::Invalid { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertainLp {
    n: usize,
    m: usize,
    u: Vec<UncertainScalar>,
    y: Vec<UncertainScalar>,
    z: Vec<UncertainScalar>,
    x_bounds: Vec<Interval>,
}

impl UncertainLp {
    /// `y` is row-major with `m` rows of `n` entries.
    pub fn new(
        u: Vec<UncertainScalar>,
        y: Vec<UncertainScalar>,
        z: Vec<UncertainScalar>,
        x_bounds: Vec<Interval>,
    ) -> Result<Self, ProblemError> {
        let n = u.len();
        let m = z.len();
        if n == 0 {
            return Err(invalid("u", "at least one decision variable is required"));
        }
        if y.len() != m * n {
            return Err(invalid("y", format!("expected {} entries (m·n), got {}", m * n, y.len())));
        }
        if x_bounds.len() != n {
            return Err(invalid(
                "x_bounds",
                format!("expected {n} intervals, got {}", x_bounds.len()),
            ));
        }
        if let Some(j) = x_bounds.iter().position(|b| b.lo() < 0.0) {
            return Err(invalid(format!("x_bounds[{j}]"), "lower bound must be nonnegative"));
        }
        Ok(Self { n, m, u, y, z, x_bounds })
    }

    /// Rebuild a problem from a flat parameter list in the canonical order.
    pub fn from_entries(
        n: usize,
        m: usize,
        entries: Vec<UncertainScalar>,
        x_bounds: Vec<Interval>,
    ) -> Result<Self, ProblemError> {
        if entries.len() != n + m * n + m {
            return Err(invalid(
                "entries",
                format!("expected {} entries, got {}", n + m * n + m, entries.len()),
            ));
        }
        let mut it = entries.into_iter();
        let u: Vec<_> = it.by_ref().take(n).collect();
        let y: Vec<_> = it.by_ref().take(m * n).collect();
        let z: Vec<_> = it.collect();
        Self::new(u, y, z, x_bounds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn u(&self) -> &[UncertainScalar] {
        &self.u
    }

    pub fn y(&self) -> &[UncertainScalar] {
        &self.y
    }

    pub fn y_entry(&self, row: usize, col: usize) -> &UncertainScalar {
        &self.y[row * self.n + col]
    }

    pub fn z(&self) -> &[UncertainScalar] {
        &self.z
    }

    pub fn x_bounds(&self) -> &[Interval] {
        &self.x_bounds
    }

    pub fn entry_count(&self) -> usize {
        self.n + self.m * self.n + self.m
    }

    /// All parameters in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = &UncertainScalar> {
        self.u.iter().chain(&self.y).chain(&self.z)
    }

    pub fn joint(&self) -> JointModel {
        JointModel::new(self.entries().cloned().collect()).expect("at least one entry")
    }

    pub fn is_interval_typed(&self) -> bool {
        self.entries().all(UncertainScalar::is_interval_typed)
    }

    /// Per-entry support minimum of the objective coefficients.
    pub fn u_lower(&self) -> Vec<f64> {
        self.u.iter().map(|e| e.support().lo()).collect()
    }

    /// Guaranteed objective `Σ_j inf(U_j) · x_j`.
    pub fn guaranteed_objective(&self, x: &DecisionVector) -> f64 {
        dot(&self.u_lower(), x.as_slice())
    }

    pub fn decision(&self, values: Vec<f64>) -> Result<DecisionVector, ProblemError> {
        DecisionVector::new(values, &self.x_bounds)
    }
}

/// One realization `(u, y, z)` of the uncertain parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization {
    pub u: Vec<f64>,
    /// Row-major `m × n`.
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl Realization {
    pub fn new(u: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Result<Self, ProblemError> {
        let (n, m) = (u.len(), z.len());
        if y.len() != n * m {
            return Err(invalid("y", format!("expected {} entries, got {}", n * m, y.len())));
        }
        if u.iter().chain(&y).chain(&z).any(|v| !v.is_finite()) {
            return Err(invalid("realization", "all entries must be finite"));
        }
        Ok(Self { u, y, z })
    }

    /// Split a flat vector in canonical order.
    pub fn from_flat(n: usize, m: usize, flat: &[f64]) -> Self {
        debug_assert_eq!(flat.len(), n + m * n + m);
        Self {
            u: flat[..n].to_vec(),
            y: flat[n..n + m * n].to_vec(),
            z: flat[n + m * n..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.u.iter().chain(&self.y).chain(&self.z).copied().collect()
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn m(&self) -> usize {
        self.z.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.y[i * n..(i + 1) * n]
    }

    /// Whether the realization lies inside every entry's support.
    pub fn within(&self, problem: &UncertainLp) -> bool {
        self.to_flat().iter().zip(problem.entries()).all(|(v, e)| e.support().contains(*v))
    }
}

/// A nonnegative decision inside the problem's box bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DecisionVector(Vec<f64>);

impl DecisionVector {
    pub fn new(values: Vec<f64>, bounds: &[Interval]) -> Result<Self, ProblemError> {
        if values.len() != bounds.len() {
            return Err(invalid(
                "x",
                format!("expected {} coordinates, got {}", bounds.len(), values.len()),
            ));
        }
        for (j, (v, b)) in values.iter().zip(bounds).enumerate() {
            if !v.is_finite() || *v < 0.0 || !b.contains(*v) {
                return Err(invalid(format!("x[{j}]"), format!("{v} is outside {b}")));
            }
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_checks() {
        let p = |v: f64| UncertainScalar::point(v).unwrap();
        let b = Interval::new(0.0, 1.0).unwrap();
        assert!(UncertainLp::new(vec![p(1.0)], vec![p(1.0)], vec![p(1.0)], vec![b]).is_ok());
        assert!(UncertainLp::new(vec![p(1.0)], vec![], vec![p(1.0)], vec![b]).is_err());
        assert!(UncertainLp::new(vec![p(1.0)], vec![p(1.0)], vec![p(1.0)], vec![]).is_err());
        let neg = Interval::new(-1.0, 1.0).unwrap();
        assert!(UncertainLp::new(vec![p(1.0)], vec![p(1.0)], vec![p(1.0)], vec![neg]).is_err());
    }

    #[test]
    fn flat_round_trip() {
        let r = Realization::new(vec![1.0, 2.0], vec![3.0, 4.0, 5.0, 6.0], vec![7.0, 8.0]).unwrap();
        let flat = r.to_flat();
        assert_eq!(Realization::from_flat(2, 2, &flat), r);
        assert_eq!(r.row(1), &[5.0, 6.0]);
    }

    #[test]
    fn decision_bounds() {
        let b = vec![Interval::new(0.0, 10.0).unwrap()];
        assert!(DecisionVector::new(vec![11.0], &b).is_err());
        assert!(DecisionVector::new(vec![-0.0], &b).is_ok());
        assert!(DecisionVector::new(vec![1.0, 2.0], &b).is_err());
    }
}
