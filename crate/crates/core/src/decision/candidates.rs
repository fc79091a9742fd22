use serde::Serialize;

use crate::lp::{self, approx_eq};
use crate::problem::{DecisionVector, UncertainLp};

use super::DecisionError;

/// Duplicate threshold per coordinate.
pub const DUPLICATE_TOL: f64 = 1e-12;
/// Default grid resolution per decision axis.
pub const DEFAULT_GRID_PER_AXIS: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    GridPoint,
    NominalVertex,
    RobustVertex,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub x: DecisionVector,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateOptions {
    pub grid_per_axis: usize,
    pub include_vertices: bool,
}

impl Default for CandidateOptions {
    fn default() -> Self {
        Self { grid_per_axis: DEFAULT_GRID_PER_AXIS, include_vertices: true }
    }
}

/// A nonempty, duplicate-free list of decisions.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CandidateSet {
    candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn new(candidates: Vec<Candidate>) -> Result<Self, DecisionError> {
        if candidates.is_empty() {
            return Err(DecisionError::EmptyCandidates);
        }
        for (i, c) in candidates.iter().enumerate() {
            if let Some(k) = candidates[..i]
                .iter()
                .position(|o| approx_eq(o.x.as_slice(), c.x.as_slice(), DUPLICATE_TOL))
            {
                return Err(DecisionError::DuplicateCandidate { first: k, second: i });
            }
        }
        Ok(Self { candidates })
    }

    /// Build from decisions given in order, tagging them as supplied.
    pub fn from_decisions(xs: Vec<DecisionVector>) -> Result<Self, DecisionError> {
        Self::new(xs.into_iter().map(|x| Candidate { x, provenance: Provenance::Supplied }).collect())
    }

    /// Uniform grid over the box bounds, then the nominal polytope's vertices,
    /// then (for interval-typed problems) the robust counterpart's vertices.
    /// Later duplicates of earlier candidates are dropped.
    pub fn build(problem: &UncertainLp, options: &CandidateOptions) -> Result<Self, DecisionError> {
        let mut out: Vec<Candidate> = Vec::new();
        let mut push = |x: DecisionVector, provenance: Provenance| {
            if !out.iter().any(|c| approx_eq(c.x.as_slice(), x.as_slice(), DUPLICATE_TOL)) {
                out.push(Candidate { x, provenance });
            }
        };
        let axes: Vec<Vec<f64>> =
            problem.x_bounds().iter().map(|b| b.grid(options.grid_per_axis.max(1))).collect();
        let mut idx = vec![0usize; axes.len()];
        loop {
            let point = idx.iter().zip(&axes).map(|(&k, a)| a[k]).collect();
            push(problem.decision(point)?, Provenance::GridPoint);
            if !crate::uncertainty::advance_index(&mut idx, |i| axes[i].len()) {
                break;
            }
        }
        if options.include_vertices {
            for v in lp::nominal_vertices(problem)? {
                push(v, Provenance::NominalVertex);
            }
            if problem.is_interval_typed() {
                for v in lp::robust_vertices(problem)? {
                    push(v, Provenance::RobustVertex);
                }
            }
        }
        Self::new(out)
    }

    /// Drop candidates whose guaranteed objective `inf(U)ᵀx` is not strictly
    /// positive; no punishment exists for them.
    pub fn retain_positive(&self, problem: &UncertainLp) -> Result<Self, DecisionError> {
        let kept: Vec<Candidate> = self
            .candidates
            .iter()
            .filter(|c| problem.guaranteed_objective(&c.x) > 0.0)
            .cloned()
            .collect();
        if kept.is_empty() {
            return Err(DecisionError::NoPositiveCandidate);
        }
        Ok(Self { candidates: kept })
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Candidate> {
        self.candidates.iter()
    }

    pub fn get(&self, i: usize) -> &Candidate {
        &self.candidates[i]
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn as_slice(&self) -> &[Candidate] {
        &self.candidates
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uncertainty::{Interval, UncertainScalar};

    fn interval_problem() -> UncertainLp {
        UncertainLp::new(
            vec![UncertainScalar::interval(1.0, 2.0).unwrap()],
            vec![UncertainScalar::interval(1.0, 2.0).unwrap()],
            vec![UncertainScalar::interval(4.0, 6.0).unwrap()],
            vec![Interval::new(0.0, 10.0).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn grid_plus_vertices() {
        let set = CandidateSet::build(&interval_problem(), &CandidateOptions::default()).unwrap();
        // 21 grid points, nominal vertex 10/3 (0 is a duplicate), robust vertex 2 is a duplicate
        assert_eq!(set.len(), 22);
        assert_eq!(set.get(21).provenance, Provenance::NominalVertex);
        assert!((set.get(21).x.as_slice()[0] - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_rejected() {
        let b = vec![Interval::new(0.0, 1.0).unwrap()];
        let x = DecisionVector::new(vec![0.5], &b).unwrap();
        let err = CandidateSet::from_decisions(vec![x.clone(), x]).unwrap_err();
        assert_eq!(err, DecisionError::DuplicateCandidate { first: 0, second: 1 });
        assert_eq!(CandidateSet::from_decisions(vec![]).unwrap_err(), DecisionError::EmptyCandidates);
    }

    #[test]
    fn retain_positive_drops_origin() {
        let p = interval_problem();
        let set = CandidateSet::build(&p, &CandidateOptions::default()).unwrap();
        let kept = set.retain_positive(&p).unwrap();
        assert_eq!(kept.len(), set.len() - 1);
        assert!(kept.iter().all(|c| c.x.as_slice()[0] > 0.0));
    }
}
