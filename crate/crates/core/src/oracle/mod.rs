//! Brute-force verifiers for lower expectations and decision sets.
//!
//! Nothing here reuses the evaluation code under test: the oracle enumerates
//! every joint focal box, probes each box at explicit selection points and
//! evaluates its own copy of the utility. Only the model types and their
//! discretization into focal elements are shared.
//!
//! Grid probing over-estimates box minima by at most the modulus of
//! continuity of `f` over one grid cell; with `k` points per axis on an
//! interval of width `w` that is `K·w/(2(k−1))` per coordinate for a
//! coordinate-wise `K`-Lipschitz `f`.

pub mod instances;

use rayon::prelude::*;
use thiserror::Error;

use crate::decision::CandidateSet;
use crate::problem::UncertainLp;
use crate::uncertainty::{DsStructure, FocalCount, Interval, JointModel, UncertainScalar, UncertaintyError};
use crate::TOL;

/// Default number of grid points per axis.
pub const DEFAULT_GRID_PER_AXIS: usize = 33;
/// Default evaluation budget per expectation.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("oracle budget exceeded: {required} evaluations needed, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("function evaluated to {0} during brute-force enumeration")]
    NonFinite(f64),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// Probe each focal interval at its endpoints.
    EndpointsOnly,
    /// Endpoints plus a uniform interior grid.
    EndpointsAndGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub grid_per_axis: usize,
    pub selection: SelectionMode,
    pub seed: u64,
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_per_axis: DEFAULT_GRID_PER_AXIS,
            selection: SelectionMode::EndpointsAndGrid,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl OracleConfig {
    pub fn endpoints() -> Self {
        Self { selection: SelectionMode::EndpointsOnly, ..Self::default() }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.grid_per_axis < 2 {
            return Err(OracleError::InvalidConfig(format!(
                "grid_per_axis must be at least 2, got {}",
                self.grid_per_axis
            )));
        }
        Ok(())
    }

    fn select(&self, iv: &Interval) -> Vec<f64> {
        if iv.lo() == iv.hi() {
            return vec![iv.lo()];
        }
        match self.selection {
            SelectionMode::EndpointsOnly => vec![iv.lo(), iv.hi()],
            SelectionMode::EndpointsAndGrid => {
                let k = self.grid_per_axis;
                (0..k)
                    .map(|i| {
                        if i + 1 == k {
                            iv.hi()
                        } else {
                            iv.lo() + (iv.hi() - iv.lo()) * i as f64 / (k - 1) as f64
                        }
                    })
                    .collect()
            }
        }
    }

    /// Grid error bound for a box minimum of a function that is
    /// `lipschitz[i]`-Lipschitz in coordinate `i` over supports `widths`.
    pub fn grid_error(&self, lipschitz: &[f64], widths: &[f64]) -> f64 {
        let cells = match self.selection {
            SelectionMode::EndpointsOnly => 1.0,
            SelectionMode::EndpointsAndGrid => (self.grid_per_axis - 1) as f64,
        };
        lipschitz.iter().zip(widths).map(|(k, w)| k * w / (2.0 * cells)).sum()
    }
}

struct Entry {
    /// per focal element: (mass, selection points)
    focal: Vec<(f64, Vec<f64>)>,
}

/// Selection points per entry. The first `linear` entries only enter the
/// function linearly (for fixed remaining coordinates), so their endpoints
/// already attain every box extremum.
fn prepare(ds: &[DsStructure], cfg: &OracleConfig, linear: usize) -> Vec<Entry> {
    let ends = OracleConfig { selection: SelectionMode::EndpointsOnly, ..cfg.clone() };
    ds.iter()
        .enumerate()
        .map(|(i, d)| {
            let sel = if i < linear { &ends } else { cfg };
            Entry { focal: d.focal().iter().map(|(iv, m)| (*m, sel.select(iv))).collect() }
        })
        .collect()
}

fn check_budget(required: f64, cfg: &OracleConfig) -> Result<(), OracleError> {
    if required > cfg.budget as f64 {
        return Err(OracleError::BudgetExceeded {
            required: required.min(u64::MAX as f64) as u64,
            budget: cfg.budget,
        });
    }
    Ok(())
}

fn step(idx: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < len(i) {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Brute-force `E̲[f]`: the smallest mass-weighted sum over all selections of
/// one probe point per joint focal box. A single ε-contamination entry is
/// additionally checked by sweeping Dirac contaminations over the support
/// grid.
pub fn brute_lower_expectation(
    joint: &JointModel,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    focal: &FocalCount,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    lower_impl(joint, f, focal, cfg, 0)
}

fn lower_impl(
    joint: &JointModel,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    focal: &FocalCount,
    cfg: &OracleConfig,
    linear: usize,
) -> Result<f64, OracleError> {
    cfg.validate()?;
    let ds = focal.discretize(joint)?;
    let entries = prepare(&ds, cfg, linear);
    let required: f64 = entries
        .iter()
        .map(|e| e.focal.iter().map(|(_, s)| s.len() as f64).sum::<f64>())
        .product();
    check_budget(required, cfg)?;

    let dims = entries.len();
    let mut total = 0.0;
    let mut fidx = vec![0usize; dims];
    let mut point = vec![0.0; dims];
    loop {
        let mass: f64 = entries.iter().zip(&fidx).map(|(e, &k)| e.focal[k].0).product();
        let axes: Vec<&[f64]> = entries.iter().zip(&fidx).map(|(e, &k)| e.focal[k].1.as_slice()).collect();
        let mut sidx = vec![0usize; dims];
        let mut best = f64::INFINITY;
        loop {
            for i in 0..dims {
                point[i] = axes[i][sidx[i]];
            }
            let v = f(&point);
            if !v.is_finite() {
                return Err(OracleError::NonFinite(v));
            }
            best = best.min(v);
            if !step(&mut sidx, |i| axes[i].len()) {
                break;
            }
        }
        total += mass * best;
        if !step(&mut fidx, |i| entries[i].focal.len()) {
            break;
        }
    }

    if let [UncertainScalar::Contamination(c)] = joint.entries() {
        let grid = c.support().grid(cfg.grid_per_axis);
        check_budget((grid.len() + c.center().atoms().len()) as f64, cfg)?;
        let center: f64 = c.center().atoms().iter().map(|&(v, p)| p * f(&[v])).sum();
        let eps = c.epsilon();
        let sweep = grid
            .iter()
            .map(|&v| (1.0 - eps) * center + eps * f(&[v]))
            .fold(f64::INFINITY, f64::min);
        total = total.min(sweep);
    }
    Ok(total)
}

/// Brute-force `E̅[f] = −E̲[−f]`.
pub fn brute_upper_expectation(
    joint: &JointModel,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    focal: &FocalCount,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    let neg = |v: &[f64]| -f(v);
    Ok(-brute_lower_expectation(joint, &neg, focal, cfg)?)
}

/// Independent copy of the utility on a flat realization `(u, y, z)`.
fn oracle_utility(x: &[f64], flat: &[f64], n: usize, m: usize, punishment: f64) -> f64 {
    let mut feasible = true;
    for i in 0..m {
        let mut lhs = 0.0;
        for j in 0..n {
            lhs += flat[n + i * n + j] * x[j];
        }
        if lhs > flat[n + m * n + i] + TOL {
            feasible = false;
            break;
        }
    }
    if feasible {
        let mut obj = 0.0;
        for j in 0..n {
            obj += flat[j] * x[j];
        }
        obj
    } else {
        punishment
    }
}

/// Candidates whose brute-force lower utility is within [`TOL`] of the best.
pub fn brute_maximin(
    problem: &UncertainLp,
    candidates: &CandidateSet,
    punishment: f64,
    focal: &FocalCount,
    cfg: &OracleConfig,
) -> Result<Vec<usize>, OracleError> {
    let joint = problem.joint();
    let (n, m) = (problem.n(), problem.m());
    let lower: Vec<f64> = candidates
        .as_slice()
        .par_iter()
        .map(|c| {
            let x = c.x.as_slice().to_vec();
            let g = move |flat: &[f64]| oracle_utility(&x, flat, n, m, punishment);
            lower_impl(&joint, &g, focal, cfg, n)
        })
        .collect::<Result<_, _>>()?;
    let best = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..lower.len()).filter(|&i| lower[i] >= best - TOL).collect())
}

/// Brute-force `E̅[G_x − G_x']`.
///
/// Objective coordinates are probed at their endpoints: the difference is
/// linear in them once feasibility is fixed. Each constraint row
/// `(y_i1, …, y_in, z_i)` is probed at every combination of selection
/// points, and additionally along every edge of its focal box (one free
/// coordinate, the others at selection points) at the values where either
/// decision switches feasibility and halfway between consecutive probes.
/// A feasibility pattern of `(x, x')` achievable anywhere in a row box is
/// achievable at a vertex or on an edge segment of that box, so endpoint
/// selection already makes the row enumeration exact.
pub fn brute_upper_difference(
    problem: &UncertainLp,
    x: &[f64],
    other: &[f64],
    punishment: f64,
    focal: &FocalCount,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    cfg.validate()?;
    let (n, m) = (problem.n(), problem.m());
    let ds = focal.discretize(&problem.joint())?;
    let entries = prepare(&ds, cfg, n);
    let uy = n + m * n;
    let row_entries = |i: usize| -> Vec<usize> {
        let mut e: Vec<usize> = (0..n).map(|j| n + i * n + j).collect();
        e.push(uy + i);
        e
    };
    let mut required: f64 = entries[..n]
        .iter()
        .map(|e| e.focal.iter().map(|(_, s)| s.len() as f64).sum::<f64>())
        .product();
    for i in 0..m {
        let idx = row_entries(i);
        let mut combo = vec![0usize; idx.len()];
        let mut row_total = 0.0;
        loop {
            let sizes: Vec<usize> = idx.iter().zip(&combo).map(|(&e, &k)| entries[e].focal[k].1.len()).collect();
            row_total += row_probe_bound(&sizes);
            if !step(&mut combo, |c| entries[idx[c]].focal.len()) {
                break;
            }
        }
        required *= row_total;
    }
    check_budget(required, cfg)?;

    let dims = entries.len();
    let mut total = 0.0;
    let mut fidx = vec![0usize; dims];
    let mut flat = vec![0.0; dims];
    loop {
        let mass: f64 = entries.iter().zip(&fidx).map(|(e, &k)| e.focal[k].0).product();
        let axes: Vec<&[f64]> = entries.iter().zip(&fidx).map(|(e, &k)| e.focal[k].1.as_slice()).collect();
        let rows: Vec<Vec<Vec<f64>>> = (0..m)
            .map(|i| {
                let coords: Vec<&[f64]> = row_entries(i).into_iter().map(|e| axes[e]).collect();
                row_probes(&coords, x, other)
            })
            .collect();
        let mut best = f64::NEG_INFINITY;
        let mut uidx = vec![0usize; n];
        loop {
            for j in 0..n {
                flat[j] = axes[j][uidx[j]];
            }
            let mut ridx = vec![0usize; m];
            loop {
                for i in 0..m {
                    let probe = &rows[i][ridx[i]];
                    flat[n + i * n..n + (i + 1) * n].copy_from_slice(&probe[..n]);
                    flat[uy + i] = probe[n];
                }
                let d = oracle_utility(x, &flat, n, m, punishment) - oracle_utility(other, &flat, n, m, punishment);
                best = best.max(d);
                if !step(&mut ridx, |i| rows[i].len()) {
                    break;
                }
            }
            if !step(&mut uidx, |j| axes[j].len()) {
                break;
            }
        }
        total += mass * best;
        if !step(&mut fidx, |i| entries[i].focal.len()) {
            break;
        }
    }
    Ok(total)
}

/// Upper bound on the number of probes [`row_probes`] returns.
fn row_probe_bound(sizes: &[usize]) -> f64 {
    let all: f64 = sizes.iter().map(|&s| s as f64).product();
    let edges: f64 = (0..sizes.len())
        .map(|c| {
            let others: f64 = sizes.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, &s)| s as f64).product();
            others * (2.0 * (sizes[c] as f64 + 2.0) - 1.0)
        })
        .sum();
    all + edges
}

/// Probe points `(y_i1, …, y_in, z_i)` of one row box whose coordinates have
/// the selection points `coords` (the last coordinate is `z_i`).
fn row_probes(coords: &[&[f64]], x: &[f64], other: &[f64]) -> Vec<Vec<f64>> {
    let k = coords.len();
    let n = k - 1;
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        out.push(idx.iter().enumerate().map(|(c, &i)| coords[c][i]).collect());
        if !step(&mut idx, |c| coords[c].len()) {
            break;
        }
    }
    for free in 0..k {
        let axis = coords[free];
        let (lo, hi) = (axis[0], axis[axis.len() - 1]);
        if lo == hi {
            continue;
        }
        let mut idx = vec![0usize; k];
        loop {
            let mut point: Vec<f64> = idx.iter().enumerate().map(|(c, &i)| coords[c][i]).collect();
            let mut values: Vec<f64> = axis.to_vec();
            for d in [x, other] {
                // row slack s(v) = y·d − z − TOL, linear in the free coordinate
                let fixed: f64 = (0..n).filter(|&j| j != free).map(|j| point[j] * d[j]).sum::<f64>()
                    - if free == n { 0.0 } else { point[n] };
                let breakpoint = if free == n {
                    Some(fixed - TOL)
                } else if d[free] != 0.0 {
                    Some((TOL - fixed) / d[free])
                } else {
                    None
                };
                if let Some(b) = breakpoint.filter(|b| *b >= lo && *b <= hi) {
                    values.push(b);
                }
            }
            values.sort_by(f64::total_cmp);
            values.dedup();
            let mids: Vec<f64> = values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            for v in values.into_iter().chain(mids) {
                point[free] = v;
                out.push(point.clone());
            }
            // the free coordinate's own index is irrelevant: visit it once
            if !step(&mut idx, |c| if c == free { 1 } else { coords[c].len() }) {
                break;
            }
        }
    }
    out
}

/// Candidates `x` with brute-force `E̅[G_x − G_x'] ≥ −TOL` against every other
/// candidate (or `> TOL` when `strict`).
pub fn brute_maximal(
    problem: &UncertainLp,
    candidates: &CandidateSet,
    punishment: f64,
    focal: &FocalCount,
    cfg: &OracleConfig,
    strict: bool,
) -> Result<Vec<usize>, OracleError> {
    let c = candidates.as_slice();
    let keep: Vec<bool> = (0..c.len())
        .into_par_iter()
        .map(|i| {
            for k in (0..c.len()).filter(|&k| k != i) {
                let d = brute_upper_difference(
                    problem,
                    c[i].x.as_slice(),
                    c[k].x.as_slice(),
                    punishment,
                    focal,
                    cfg,
                )?;
                let ok = if strict { d > TOL } else { d >= -TOL };
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_, OracleError>>()?;
    Ok((0..c.len()).filter(|&i| keep[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uncertainty::{DiscreteDistribution, Contamination};

    fn single(e: UncertainScalar) -> JointModel {
        JointModel::single(e)
    }

    #[test]
    fn point_identity() {
        let j = single(UncertainScalar::point(3.0).unwrap());
        let v = brute_lower_expectation(&j, &|v| v[0], &FocalCount::default(), &OracleConfig::default());
        assert_eq!(v.unwrap(), 3.0);
    }

    #[test]
    fn shifted_square_within_grid_error() {
        let j = single(UncertainScalar::interval(0.0, 1.0).unwrap());
        let f = |v: &[f64]| (v[0] - 0.3).powi(2);
        let lo = brute_lower_expectation(&j, &f, &FocalCount::default(), &OracleConfig::default()).unwrap();
        assert!(lo >= 0.0 && lo <= (1.0f64 / 32.0).powi(2), "{lo}");
    }

    #[test]
    fn ds_endpoint_selection() {
        let cdf = crate::uncertainty::Cdf::step(vec![(0.0, 0.5), (1.0, 1.0)]).unwrap();
        let upper = cdf.clone();
        let lower = crate::uncertainty::Cdf::step(vec![(1.0, 0.5), (2.0, 1.0)]).unwrap();
        let pb = crate::uncertainty::PBox::new(Interval::new(0.0, 2.0).unwrap(), lower, upper).unwrap();
        // slices at levels 0.25 and 0.75: [0, 1] and [1, 2]
        let j = single(UncertainScalar::PBox(pb));
        let lo = brute_lower_expectation(&j, &|v| v[0], &FocalCount::Uniform(2), &OracleConfig::endpoints()).unwrap();
        assert_eq!(lo, 0.5);
        let hi = brute_upper_expectation(&j, &|v| v[0], &FocalCount::Uniform(2), &OracleConfig::endpoints()).unwrap();
        assert_eq!(hi, 1.5);
    }

    #[test]
    fn dirac_sweep_matches_closed_form() {
        let c = Contamination::new(
            DiscreteDistribution::uniform(&[1.0, 2.0, 3.0]).unwrap(),
            0.5,
            Interval::new(1.0, 3.0).unwrap(),
        )
        .unwrap();
        let j = single(UncertainScalar::Contamination(c));
        let lo = brute_lower_expectation(&j, &|v| v[0], &FocalCount::default(), &OracleConfig::default()).unwrap();
        assert!((lo - 1.5).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let j = JointModel::new(vec![UncertainScalar::interval(0.0, 1.0).unwrap(); 5]).unwrap();
        let cfg = OracleConfig { grid_per_axis: 33, ..OracleConfig::default() };
        let err = brute_lower_expectation(&j, &|v| v[0], &FocalCount::default(), &cfg).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn row_probes_find_thin_mixed_regions() {
        // x feasible for y ≤ (1 + TOL)/2, x' for y ≤ (1 + TOL)/(2 + 1e-8)
        let x = [2.0];
        let other = [2.0 + 1e-8];
        let probes = row_probes(&[&[0.0, 1.0], &[1.0]], &x, &other);
        let mixed = probes.iter().any(|p| p[0] * x[0] <= p[1] + TOL && p[0] * other[0] > p[1] + TOL);
        assert!(mixed);
        let bound = row_probe_bound(&[2, 1]);
        assert!(probes.len() as f64 <= bound);
    }

    #[test]
    fn thin_region_enters_upper_difference() {
        let p = UncertainLp::new(
            vec![UncertainScalar::point(1.0).unwrap()],
            vec![UncertainScalar::interval(0.0, 1.0).unwrap()],
            vec![UncertainScalar::point(1.0).unwrap()],
            vec![Interval::new(0.0, 3.0).unwrap()],
        )
        .unwrap();
        let d = brute_upper_difference(&p, &[2.0], &[2.0 + 1e-8], 0.5, &FocalCount::default(), &OracleConfig::endpoints())
            .unwrap();
        assert_eq!(d, 2.0 - 0.5);
    }
}
