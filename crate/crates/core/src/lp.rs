//! Exact solver for small deterministic LPs by enumerating basic solutions,
//! and the worst-case counterpart of an interval-typed uncertain LP.
//!
//! The constraint system is `A x ≤ b` together with the box `lo ≤ x ≤ hi`.
//! Every choice of `n` active constraints out of the `m + 2n` candidates is
//! solved as an equality system; feasible solutions are the vertices of the
//! (bounded) polytope.

use serde::Serialize;
use thiserror::Error;

use crate::problem::{dot, DecisionVector, ProblemError, UncertainLp};
use crate::uncertainty::Interval;
use crate::TOL;

/// Largest `n + m` accepted by the enumeration.
pub const MAX_ENUMERATION_DIM: usize = 14;
/// Pivots smaller than this mark an active set as singular.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension limit exceeded: n + m = {n} + {m} > {MAX_ENUMERATION_DIM}")]
    DimensionLimit { n: usize, m: usize },
    #[error("entry {index} uses a {kind} model; the robust counterpart needs point or interval entries")]
    WrongModel { index: usize, kind: &'static str },
    #[error("invalid LP: {0}")]
    Invalid(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// A vertex and the indices of its active constraints.
type BasicSolution = (Vec<f64>, Vec<usize>);

/// `max cᵀx s.t. A x ≤ b, x ∈ bounds`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterministicLp {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    bounds: Vec<Interval>,
}

impl DeterministicLp {
    pub fn new(
        c: Vec<f64>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        bounds: Vec<Interval>,
    ) -> Result<Self, LpError> {
        let n = c.len();
        if n == 0 {
            return Err(LpError::Invalid("no variables".into()));
        }
        if bounds.len() != n {
            return Err(LpError::Invalid(format!("{} bounds for {n} variables", bounds.len())));
        }
        if a.len() != b.len() {
            return Err(LpError::Invalid(format!("{} rows but {} rhs entries", a.len(), b.len())));
        }
        if a.iter().any(|row| row.len() != n) {
            return Err(LpError::Invalid(format!("every row of A needs {n} entries")));
        }
        let all = c.iter().chain(a.iter().flatten()).chain(&b);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(LpError::Invalid("coefficients must be finite".into()));
        }
        if bounds.iter().any(|iv| iv.lo() < 0.0) {
            return Err(LpError::Invalid("variable lower bounds must be nonnegative".into()));
        }
        Ok(Self { c, a, b, bounds })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    /// Whether `x` satisfies every constraint within [`TOL`].
    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, bi)| dot(row, x) <= bi + TOL)
            && x.iter().zip(&self.bounds).all(|(v, iv)| *v >= iv.lo() - TOL && *v <= iv.hi() + TOL)
    }

    /// Active-set row `k` as `(coefficients, rhs)`; rows `0..m` are `A`,
    /// then `-x_j ≤ -lo_j`, then `x_j ≤ hi_j`.
    fn constraint(&self, k: usize) -> (Vec<f64>, f64) {
        let (n, m) = (self.n(), self.m());
        if k < m {
            (self.a[k].clone(), self.b[k])
        } else if k < m + n {
            let j = k - m;
            let mut row = vec![0.0; n];
            row[j] = -1.0;
            (row, -self.bounds[j].lo())
        } else {
            let j = k - m - n;
            let mut row = vec![0.0; n];
            row[j] = 1.0;
            (row, self.bounds[j].hi())
        }
    }

    fn check_guard(&self) -> Result<(), LpError> {
        if self.n() + self.m() > MAX_ENUMERATION_DIM {
            return Err(LpError::DimensionLimit { n: self.n(), m: self.m() });
        }
        Ok(())
    }

    /// All feasible basic solutions with the active set that produced them,
    /// clamped into the box, in enumeration order (duplicates included).
    fn basic_feasible_solutions(&self) -> Result<Vec<BasicSolution>, LpError> {
        self.check_guard()?;
        let n = self.n();
        let total = self.m() + 2 * n;
        let rows: Vec<(Vec<f64>, f64)> = (0..total).map(|k| self.constraint(k)).collect();
        let mut out = Vec::new();
        let mut active: Vec<usize> = (0..n).collect();
        loop {
            let mut mat: Vec<Vec<f64>> = active.iter().map(|&k| rows[k].0.clone()).collect();
            let mut rhs: Vec<f64> = active.iter().map(|&k| rows[k].1).collect();
            if let Some(x) = solve_square(&mut mat, &mut rhs) {
                if self.is_feasible(&x) {
                    let x = x.iter().zip(&self.bounds).map(|(v, iv)| iv.clamp(*v)).collect();
                    out.push((x, active.clone()));
                }
            }
            if !next_combination(&mut active, total) {
                break;
            }
        }
        Ok(out)
    }

    /// Feasible vertices, deduplicated within [`TOL`] and sorted
    /// lexicographically.
    pub fn vertices(&self) -> Result<Vec<Vec<f64>>, LpError> {
        let mut verts: Vec<Vec<f64>> = Vec::new();
        for (x, _) in self.basic_feasible_solutions()? {
            if !verts.iter().any(|v| approx_eq(v, &x, TOL)) {
                verts.push(x);
            }
        }
        verts.sort_by(|a, b| lex_cmp(a, b));
        Ok(verts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LpSolution {
    Optimal { x: Vec<f64>, value: f64, basis: Vec<usize> },
    Infeasible,
}

impl LpSolution {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { value, .. } => Some(*value),
            LpSolution::Infeasible => None,
        }
    }

    pub fn x(&self) -> Option<&[f64]> {
        match self {
            LpSolution::Optimal { x, .. } => Some(x),
            LpSolution::Infeasible => None,
        }
    }
}

/// Maximize `cᵀx` over the feasible vertices. Value ties within [`TOL`] go to
/// the lexicographically smallest vertex.
pub fn solve_exact(lp: &DeterministicLp) -> Result<LpSolution, LpError> {
    let mut best: Option<(Vec<f64>, f64, Vec<usize>)> = None;
    for (x, basis) in lp.basic_feasible_solutions()? {
        let value = dot(&lp.c, &x);
        let replace = match &best {
            None => true,
            Some((bx, bv, _)) => {
                value > bv + TOL
                    || ((value - bv).abs() <= TOL && lex_cmp(&x, bx) == std::cmp::Ordering::Less)
            }
        };
        if replace {
            best = Some((x, value, basis));
        }
    }
    Ok(match best {
        Some((x, value, basis)) => LpSolution::Optimal { x, value, basis },
        None => LpSolution::Infeasible,
    })
}

/// Worst case of an interval-typed problem: smallest objective coefficients,
/// largest constraint coefficients, smallest right-hand sides.
pub fn robust_counterpart(problem: &UncertainLp) -> Result<DeterministicLp, LpError> {
    if let Some((index, e)) = problem.entries().enumerate().find(|(_, e)| !e.is_interval_typed()) {
        return Err(LpError::WrongModel { index, kind: e.kind() });
    }
    let (n, m) = (problem.n(), problem.m());
    let c = problem.u().iter().map(|e| e.support().lo()).collect();
    let a = (0..m)
        .map(|i| (0..n).map(|j| problem.y_entry(i, j).support().hi()).collect())
        .collect();
    let b = problem.z().iter().map(|e| e.support().lo()).collect();
    DeterministicLp::new(c, a, b, problem.x_bounds().to_vec())
}

/// The LP at the support midpoints of `Y` and `Z` (objective at midpoints of `U`).
pub fn nominal_lp(problem: &UncertainLp) -> Result<DeterministicLp, LpError> {
    let (n, m) = (problem.n(), problem.m());
    let c = problem.u().iter().map(|e| e.support().mid()).collect();
    let a = (0..m)
        .map(|i| (0..n).map(|j| problem.y_entry(i, j).support().mid()).collect())
        .collect();
    let b = problem.z().iter().map(|e| e.support().mid()).collect();
    DeterministicLp::new(c, a, b, problem.x_bounds().to_vec())
}

/// Feasible vertices of `{y̌ x ≤ ž, x in bounds}` at support midpoints.
pub fn nominal_vertices(problem: &UncertainLp) -> Result<Vec<DecisionVector>, LpError> {
    to_decisions(problem, nominal_lp(problem)?.vertices()?)
}

/// Feasible vertices of the robust counterpart's polytope `{ȳ x ≤ z̲}`.
pub fn robust_vertices(problem: &UncertainLp) -> Result<Vec<DecisionVector>, LpError> {
    to_decisions(problem, robust_counterpart(problem)?.vertices()?)
}

fn to_decisions(problem: &UncertainLp, verts: Vec<Vec<f64>>) -> Result<Vec<DecisionVector>, LpError> {
    verts.into_iter().map(|v| Ok(problem.decision(v)?)).collect()
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(mat: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| mat[r][col].abs().total_cmp(&mat[s][col].abs()))?;
        if mat[pivot][col].abs() < PIVOT_TOL {
            return None;
        }
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let factor = mat[r][col] / mat[col][col];
            if factor != 0.0 {
                let (top, bottom) = mat.split_at_mut(r);
                for (a, b) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                    *a -= factor * b;
                }
                rhs[r] -= factor * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| mat[r][k] * x[k]).sum();
        x[r] = (rhs[r] - s) / mat[r][r];
    }
    Some(x)
}

/// Next `k`-subset of `0..total` in lexicographic order.
fn next_combination(idx: &mut [usize], total: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < total - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub(crate) fn approx_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}
