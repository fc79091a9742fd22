use crate::problem::{dot, DecisionVector, Realization, UncertainLp};
use crate::TOL;

use super::{CandidateSet, DecisionError};

/// Whether every constraint row holds at `r` (within [`TOL`]).
pub fn is_feasible_at(x: &[f64], r: &Realization) -> bool {
    (0..r.m()).all(|i| dot(r.row(i), x) <= r.z[i] + TOL)
}

/// `G_x(u, y, z) = (uᵀx − L)·1[yx ≤ z] + L`: the objective when every
/// constraint holds at the realization, the punishment `L` otherwise.
pub fn utility(x: &DecisionVector, r: &Realization, punishment: f64) -> f64 {
    if is_feasible_at(x.as_slice(), r) {
        dot(&r.u, x.as_slice())
    } else {
        punishment
    }
}

/// Half the smallest guaranteed objective `inf(U)ᵀx` over the candidates
/// whose guaranteed objective is strictly positive.
pub fn choose_punishment(
    problem: &UncertainLp,
    candidates: &CandidateSet,
) -> Result<f64, DecisionError> {
    let min = candidates
        .iter()
        .map(|c| problem.guaranteed_objective(&c.x))
        .filter(|g| *g > 0.0)
        .fold(f64::INFINITY, f64::min);
    if min.is_finite() {
        Ok(0.5 * min)
    } else {
        Err(DecisionError::NoPositiveCandidate)
    }
}
