//! Seeded property suite comparing the evaluation code against closed forms
//! and the brute-force oracle.
//!
//! Each property draws its own instances from a generator seeded by the
//! suite seed and the property's index, so properties can be run alone and
//! reproduce exactly.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::decision::{
    self, choose_punishment, utility, CandidateOptions, CandidateSet, Criteria, DecisionError, DecisionOptions,
    DiscretizedLp,
};
use crate::lp::{robust_counterpart, solve_exact, LpError, LpSolution};
use crate::oracle::instances::{self, InstanceRng, ModelFamily, ProblemShape, TestFunction};
use crate::oracle::{self, OracleConfig, OracleError, SelectionMode};
use crate::problem::{Realization, UncertainLp};
use crate::uncertainty::{
    lower_expectation, upper_expectation, Cdf, EvaluationPlan, FocalCount, Interval, JointModel, PBox,
    UncertainScalar, UncertaintyError, DEFAULT_GRID_POINTS,
};
use crate::TOL;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Number of random instances per property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceCounts {
    pub conjugacy: usize,
    pub main_path: usize,
    pub precise_collapse: usize,
    pub contamination: usize,
    pub pbox_refinement: usize,
    pub robust_counterpart: usize,
    pub decision_agreement: usize,
    pub punishment: usize,
}

impl Default for InstanceCounts {
    fn default() -> Self {
        Self {
            conjugacy: 500,
            main_path: 200,
            precise_collapse: 100,
            contamination: 200,
            pbox_refinement: 20,
            robust_counterpart: 100,
            decision_agreement: 100,
            punishment: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub counts: InstanceCounts,
    /// Oracle used by the expectation properties.
    pub oracle: OracleConfig,
    /// Oracle used for the decision-set properties, whose cost grows with
    /// the square of the candidate count.
    pub decision_oracle: OracleConfig,
    /// Added to every tolerance. Only useful to check that the suite can
    /// fail: a negative offset makes every comparison fail.
    pub tolerance_offset: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            counts: InstanceCounts::default(),
            oracle: OracleConfig::default(),
            decision_oracle: OracleConfig {
                grid_per_axis: 3,
                selection: SelectionMode::EndpointsAndGrid,
                ..OracleConfig::default()
            },
            tolerance_offset: 0.0,
        }
    }
}

impl VerifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn tol(&self, base: f64) -> f64 {
        base + self.tolerance_offset
    }

    fn rng(&self, property: u64) -> InstanceRng {
        instances::rng(self.seed ^ (property << 40))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub violations: usize,
    /// Largest observed deviation in the property's own units (for set
    /// properties the largest symmetric-difference size).
    pub max_deviation: f64,
    /// First violation, if any.
    pub detail: Option<String>,
}

struct Tally {
    name: &'static str,
    instances: usize,
    violations: usize,
    max_deviation: f64,
    detail: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, instances: 0, violations: 0, max_deviation: 0.0, detail: None }
    }

    fn deviation(&mut self, d: f64) {
        if d > self.max_deviation || d.is_nan() {
            self.max_deviation = d;
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.violations += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            passed: self.violations == 0 && self.instances > 0,
            instances: self.instances,
            violations: self.violations,
            max_deviation: self.max_deviation,
            detail: self.detail,
        }
    }
}

fn random_box(rng: &mut InstanceRng, entries: usize) -> JointModel {
    instances::random_joint(rng, entries)
}

/// Grid error `Σ K_i·w_i / (2(k−1))` of a `k`-point grid per coordinate.
fn grid_error(lipschitz: &[f64], widths: &[f64], points: usize) -> f64 {
    lipschitz.iter().zip(widths).map(|(k, w)| k * w / (2.0 * (points - 1) as f64)).sum()
}

/// Minimum and maximum of `f` over a `points`-per-axis grid on the supports.
fn grid_extrema(supports: &[Interval], f: &dyn Fn(&[f64]) -> f64, points: usize) -> (f64, f64) {
    let axes: Vec<Vec<f64>> = supports.iter().map(|s| s.grid(points)).collect();
    let mut idx = vec![0usize; axes.len()];
    let mut p = vec![0.0; axes.len()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    loop {
        for (i, &k) in idx.iter().enumerate() {
            p[i] = axes[i][k];
        }
        let v = f(&p);
        lo = lo.min(v);
        hi = hi.max(v);
        if !crate::uncertainty::advance_index(&mut idx, |i| axes[i].len()) {
            return (lo, hi);
        }
    }
}

const FINE_GRID: usize = 129;

/// `E̅[f] = −E̲[−f]` bit for bit, and `inf f ≤ E̲ ≤ E̅ ≤ sup f` up to grid
/// error, on random one- and two-entry models.
pub fn conjugacy_and_sandwich(cfg: &VerifyConfig) -> Result<PropertyResult, VerifyError> {
    let mut rng = cfg.rng(1);
    let mut t = Tally::new("conjugacy_and_sandwich");
    let plan = EvaluationPlan::default();
    for _ in 0..cfg.counts.conjugacy {
        let dims = rng.random_range(1..=2);
        let joint = random_box(&mut rng, dims);
        let tf = TestFunction::random(&mut rng, dims);
        let f = |v: &[f64]| tf.eval(v);
        let neg = |v: &[f64]| -tf.eval(v);
        let lower = lower_expectation(&joint, &f, &plan)?;
        let upper = upper_expectation(&joint, &f, &plan)?;
        let conj = -lower_expectation(&joint, &neg, &plan.reversed())?;
        let supports = joint.supports();
        let widths: Vec<f64> = supports.iter().map(Interval::width).collect();
        let err = grid_error(&tf.lipschitz(), &widths, FINE_GRID);
        let (inf, sup) = grid_extrema(&supports, &f, FINE_GRID);
        let d_conj = (upper - conj).abs();
        let below = (inf - err) - lower;
        let crossed = lower - upper;
        let above = upper - (sup + err);
        let worst = below.max(crossed).max(above).max(0.0);
        t.deviation(d_conj.max(worst));
        t.check(d_conj <= cfg.tol(0.0), || format!("conjugacy gap {d_conj:e} on {joint:?}"));
        t.check(worst <= cfg.tol(TOL), || {
            format!("sandwich violated by {worst:e}: inf {inf}, lower {lower}, upper {upper}, sup {sup}")
        });
        t.instances += 1;
    }
    Ok(t.finish())
}

/// `E̲` from the main path agrees with the oracle within the grid error of
/// the coarser of the two grids; the oracle's lower value never exceeds its
/// upper value.
pub fn main_path_agreement(cfg: &VerifyConfig) -> Result<Vec<PropertyResult>, VerifyError> {
    let mut rng = cfg.rng(2);
    let mut agree = Tally::new("main_path_agreement");
    let mut selfc = Tally::new("oracle_self_consistency");
    let plan = EvaluationPlan::default();
    for _ in 0..cfg.counts.main_path {
        let dims = rng.random_range(1..=2);
        let joint = random_box(&mut rng, dims);
        let tf = TestFunction::random(&mut rng, dims);
        let f = |v: &[f64]| tf.eval(v);
        let main = lower_expectation(&joint, &f, &plan)?;
        let brute = oracle::brute_lower_expectation(&joint, &f, &plan.focal, &cfg.oracle)?;
        let brute_hi = oracle::brute_upper_expectation(&joint, &f, &plan.focal, &cfg.oracle)?;
        let widths: Vec<f64> = joint.supports().iter().map(Interval::width).collect();
        let bound = grid_error(&tf.lipschitz(), &widths, DEFAULT_GRID_POINTS)
            .max(cfg.oracle.grid_error(&tf.lipschitz(), &widths));
        let d = (main - brute).abs();
        agree.deviation(d);
        agree.check(d <= cfg.tol(TOL + bound), || format!("main {main} vs oracle {brute}, bound {bound:e}"));
        agree.instances += 1;
        let gap = brute - brute_hi;
        selfc.deviation(gap.max(0.0));
        selfc.check(gap <= cfg.tol(TOL), || format!("oracle lower {brute} above upper {brute_hi}"));
        selfc.instances += 1;
    }
    Ok(vec![agree.finish(), selfc.finish()])
}

fn nominal(problem: &UncertainLp) -> Realization {
    let flat: Vec<f64> = problem.entries().map(|e| e.support().mid()).collect();
    Realization::from_flat(problem.n(), problem.m(), &flat)
}

fn shape(rng: &mut InstanceRng, family: ModelFamily, uncertain_prob: f64, max_uncertain: usize) -> ProblemShape {
    ProblemShape { n: rng.random_range(1..=2), m: rng.random_range(1..=2), family, uncertain_prob, max_uncertain }
}

/// All-point problems: maximin = maximal = precise argmax, and
/// `E̲[G_x] = E̅[G_x] = G_x(nominal)` exactly.
pub fn precise_collapse(cfg: &VerifyConfig) -> Result<PropertyResult, VerifyError> {
    let mut rng = cfg.rng(3);
    let mut t = Tally::new("precise_collapse");
    let opts = DecisionOptions::default();
    for _ in 0..cfg.counts.precise_collapse {
        let sh = shape(&mut rng, ModelFamily::Point, 0.0, 0);
        let problem = instances::random_problem(&mut rng, sh);
        let cands = instances::small_candidates(&problem, 11)?;
        let outcome = decision::decide(&problem, &cands, &opts)?;
        let kept = cands.retain_positive(&problem)?;
        let r = nominal(&problem);
        let exact: Vec<f64> = kept.iter().map(|c| utility(&c.x, &r, outcome.punishment)).collect();
        let argmax = decision::argmax_set(&exact, opts.tie_tol);
        let mut dev = 0.0f64;
        for (rep, e) in outcome.candidates.iter().zip(&exact) {
            dev = dev.max((rep.lower_utility - e).abs()).max((rep.upper_utility - e).abs());
        }
        t.deviation(dev);
        t.check(dev <= cfg.tol(0.0), || format!("expectations differ from the precise utility by {dev:e}"));
        let sets_ok = outcome.maximin_indices == argmax && outcome.maximal_indices == argmax;
        t.check(sets_ok, || {
            format!(
                "maximin {:?}, maximal {:?}, precise argmax {:?}",
                outcome.maximin_indices, outcome.maximal_indices, argmax
            )
        });
        t.instances += 1;
    }
    Ok(t.finish())
}

/// `E̲[f] = (1−ε)·E_P₀[f] + ε·min f` on random contamination models, for
/// the main path and for the oracle's Dirac sweep.
pub fn contamination_closed_form(cfg: &VerifyConfig) -> Result<PropertyResult, VerifyError> {
    let mut rng = cfg.rng(4);
    let mut t = Tally::new("contamination_closed_form");
    let plan = EvaluationPlan::default();
    let fine = 4097;
    for _ in 0..cfg.counts.contamination {
        let lo = rng.random_range(-2.0..1.0);
        let hi = rng.random_range(lo + 0.1..2.0);
        let support = Interval::new(lo, hi).expect("ordered");
        let c = instances::random_contamination(&mut rng, support);
        let tf = TestFunction::random(&mut rng, 1);
        let f = |v: &[f64]| tf.eval(v);
        let eps = c.epsilon();
        let center: f64 = c.center().atoms().iter().map(|&(v, p)| p * f(&[v])).sum();
        let (min_f, _) = grid_extrema(&[support], &f, fine);
        let closed = (1.0 - eps) * center + eps * min_f;
        let joint = JointModel::single(UncertainScalar::Contamination(c));
        let main = lower_expectation(&joint, &f, &plan)?;
        let brute = oracle::brute_lower_expectation(&joint, &f, &plan.focal, &cfg.oracle)?;
        let k = tf.lipschitz();
        let w = [support.width()];
        let main_bound = eps * grid_error(&k, &w, DEFAULT_GRID_POINTS);
        let brute_bound = eps * cfg.oracle.grid_error(&k, &w);
        let (dm, db) = ((main - closed).abs(), (brute - closed).abs());
        t.deviation(dm.max(db));
        t.check(dm <= cfg.tol(TOL + main_bound), || format!("main {main} vs closed form {closed}"));
        t.check(db <= cfg.tol(TOL + brute_bound), || format!("oracle {brute} vs closed form {closed}"));
        t.instances += 1;
    }
    Ok(t.finish())
}

/// A smooth random CDF on `[0, 1]` (density `1 + a·sin(2πbx + c)`),
/// tabulated as a piecewise-linear CDF.
pub fn smooth_cdf(rng: &mut InstanceRng) -> Cdf {
    let a = rng.random_range(-0.7..0.7);
    let b = rng.random_range(1..=3) as f64;
    let c = rng.random_range(0.0..std::f64::consts::TAU);
    let w = std::f64::consts::TAU * b;
    let raw = |x: f64| x + a * (c.cos() - (w * x + c).cos()) / w;
    let total = raw(1.0);
    let knots = 128;
    let mut pts: Vec<(f64, f64)> = (0..=knots)
        .map(|k| {
            let x = k as f64 / knots as f64;
            (x, raw(x) / total)
        })
        .collect();
    pts[0].1 = 0.0;
    pts[knots].1 = 1.0;
    Cdf::linear(pts).expect("increasing knots")
}

/// A Lipschitz-1 function `λ|v − e| + (1−λ)·Σ a_k sin(b_k v + c_k)` with
/// `Σ |a_k|·b_k = 1`, and its exact mean over `[x0, x1]`.
#[derive(Debug, Clone)]
struct Lipschitz1 {
    lambda: f64,
    e: f64,
    sines: Vec<(f64, f64, f64)>,
}

impl Lipschitz1 {
    fn random(rng: &mut InstanceRng) -> Self {
        let weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let sines = weights
            .iter()
            .map(|w| {
                let b = rng.random_range(1.0..6.0);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                (sign * w / total / b, b, rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        Self { lambda: rng.random_range(0.0..1.0), e: rng.random_range(0.0..1.0), sines }
    }

    fn eval(&self, v: f64) -> f64 {
        let s: f64 = self.sines.iter().map(|(a, b, c)| a * (b * v + c).sin()).sum();
        self.lambda * (v - self.e).abs() + (1.0 - self.lambda) * s
    }

    fn mean(&self, x0: f64, x1: f64) -> f64 {
        let h = x1 - x0;
        let s: f64 = self.sines.iter().map(|(a, b, c)| a * ((b * x0 + c).cos() - (b * x1 + c).cos()) / b).sum();
        let e = self.e;
        let abs = if e <= x0 {
            0.5 * (x0 + x1) - e
        } else if e >= x1 {
            e - 0.5 * (x0 + x1)
        } else {
            ((e - x0).powi(2) + (x1 - e).powi(2)) / (2.0 * h)
        };
        self.lambda * abs + (1.0 - self.lambda) * s / h
    }

    /// Exact `E_F[f]` for a piecewise-linear CDF.
    fn expectation(&self, cdf: &Cdf) -> f64 {
        cdf.knots()
            .windows(2)
            .filter(|w| w[1].1 > w[0].1)
            .map(|w| (w[1].1 - w[0].1) * self.mean(w[0].0, w[1].0))
            .sum()
    }
}

/// Refinement levels checked by [`pbox_refinement`].
pub const REFINEMENT_LEVELS: [usize; 5] = [2, 4, 8, 16, 32];

/// For precise CDFs wrapped as degenerate p-boxes, `|E̲[f] − E_F[f]|` is
/// nonincreasing in the focal count and at most `1e-2` at 32 focal elements.
pub fn pbox_refinement(cfg: &VerifyConfig) -> Result<PropertyResult, VerifyError> {
    let mut rng = cfg.rng(5);
    let mut t = Tally::new("pbox_refinement");
    let unit = Interval::new(0.0, 1.0).expect("ordered");
    for _ in 0..cfg.counts.pbox_refinement {
        let cdf = smooth_cdf(&mut rng);
        let f = Lipschitz1::random(&mut rng);
        let exact = f.expectation(&cdf);
        let joint = JointModel::single(UncertainScalar::PBox(PBox::precise(unit, cdf)?));
        let g = |v: &[f64]| f.eval(v[0]);
        let errors: Vec<f64> = REFINEMENT_LEVELS
            .iter()
            .map(|&k| {
                let plan = EvaluationPlan::default().with_focal(FocalCount::Uniform(k));
                lower_expectation(&joint, &g, &plan).map(|v| (v - exact).abs())
            })
            .collect::<Result<_, _>>()?;
        let rises = errors.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
        let last = errors[errors.len() - 1];
        t.deviation(last);
        t.check(rises <= cfg.tol(0.0), || format!("error sequence {errors:?} increases"));
        t.check(last <= cfg.tol(1e-2), || format!("error {last:e} at 32 focal elements"));
        t.instances += 1;
    }
    Ok(t.finish())
}

/// On interval problems with the counterpart's vertices among the
/// candidates, every maximin decision's guaranteed objective equals the
/// robust counterpart's optimum.
pub fn robust_counterpart_equivalence(cfg: &VerifyConfig) -> Result<PropertyResult, VerifyError> {
    let mut rng = cfg.rng(6);
    let mut t = Tally::new("robust_counterpart_equivalence");
    let opts = DecisionOptions::default();
    let cand_opts = CandidateOptions { grid_per_axis: 11, include_vertices: true };
    for _ in 0..cfg.counts.robust_counterpart {
        let sh = shape(&mut rng, ModelFamily::Interval, 0.6, usize::MAX);
        let problem = instances::random_problem(&mut rng, sh);
        let cands = CandidateSet::build(&problem, &cand_opts)?;
        let outcome = decision::decide_with(&problem, &cands, &opts, Criteria { maximin: true, maximal: false })?;
        let optimum = match solve_exact(&robust_counterpart(&problem)?)? {
            LpSolution::Optimal { value, .. } => value,
            LpSolution::Infeasible => {
                t.check(false, || "robust counterpart infeasible".into());
                continue;
            }
        };
        let dev = outcome
            .maximin_set
            .iter()
            .map(|x| (problem.guaranteed_objective(x) - optimum).abs())
            .fold(0.0f64, f64::max);
        t.deviation(dev);
        t.check(dev <= cfg.tol(TOL), || format!("maximin guarantee differs from counterpart optimum {optimum} by {dev:e}"));
        t.instances += 1;
    }
    Ok(t.finish())
}

/// Focal count used for the decision-set properties.
pub const DECISION_FOCAL: usize = 4;

/// A small random instance for the decision-set properties: `n, m ≤ 2`, at
/// most four uncertain entries and at most 25 candidates.
pub fn decision_instance(rng: &mut InstanceRng) -> Result<(UncertainLp, CandidateSet), VerifyError> {
    let family = ModelFamily::IMPRECISE[rng.random_range(0..3)];
    let sh = shape(rng, family, 0.5, 4);
    let problem = instances::random_problem(rng, sh);
    let grid = if problem.n() == 1 { 21 } else { 4 };
    let cands = instances::small_candidates(&problem, grid)?;
    let cands = if cands.len() > 25 {
        CandidateSet::new(cands.as_slice()[..25].to_vec())?
    } else {
        cands
    };
    Ok((problem, cands))
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|i| !b.contains(i)).count() + b.iter().filter(|i| !a.contains(i)).count()
}

/// Maximin and maximal sets equal the oracle's on random small instances
/// over the three imprecise models, and every maximin candidate is maximal.
pub fn decision_agreement(cfg: &VerifyConfig) -> Result<Vec<PropertyResult>, VerifyError> {
    let mut rng = cfg.rng(7);
    let mut agree = Tally::new("decision_agreement");
    let mut subset = Tally::new("maximin_within_maximal");
    let focal = FocalCount::Uniform(DECISION_FOCAL);
    let opts = DecisionOptions { focal: focal.clone(), ..DecisionOptions::default() };
    for _ in 0..cfg.counts.decision_agreement {
        let (problem, cands) = decision_instance(&mut rng)?;
        let l = choose_punishment(&problem, &cands)?;
        let maximin = decision::maximin_decisions(&problem, &cands, l, opts.tie_tol, &focal)?;
        let maximal = decision::maximal_decisions(&problem, &cands, l, &opts)?;
        let o_maximin = oracle::brute_maximin(&problem, &cands, l, &focal, &cfg.decision_oracle)?;
        let o_maximal = oracle::brute_maximal(&problem, &cands, l, &focal, &cfg.decision_oracle, false)?;
        let d = symmetric_difference(&maximin, &o_maximin) + symmetric_difference(&maximal, &o_maximal);
        agree.deviation(d as f64);
        agree.check(d as f64 <= cfg.tol(0.0), || {
            format!("maximin {maximin:?} vs oracle {o_maximin:?}; maximal {maximal:?} vs oracle {o_maximal:?}; {problem:?}")
        });
        agree.instances += 1;
        let missing = maximin.iter().filter(|i| !maximal.contains(i)).count();
        subset.deviation(missing as f64);
        subset.check(missing as f64 <= cfg.tol(0.0), || format!("maximin {maximin:?} not within maximal {maximal:?}"));
        subset.instances += 1;
    }
    Ok(vec![agree.finish(), subset.finish()])
}

/// Punishment fractions of the smallest positive guaranteed objective used
/// by [`punishment_irrelevance`].
pub const PUNISHMENT_FRACTIONS: [f64; 2] = [0.1, 0.9];

/// The maximin set does not change between two valid punishments.
pub fn punishment_irrelevance(cfg: &VerifyConfig) -> Result<PropertyResult, VerifyError> {
    let mut rng = cfg.rng(8);
    let mut t = Tally::new("punishment_irrelevance");
    let focal = FocalCount::Uniform(DECISION_FOCAL);
    for _ in 0..cfg.counts.punishment {
        let (problem, cands) = decision_instance(&mut rng)?;
        let min_guarantee = 2.0 * choose_punishment(&problem, &cands)?;
        let [a, b] = PUNISHMENT_FRACTIONS.map(|frac| {
            decision::maximin_decisions(&problem, &cands, frac * min_guarantee, TOL, &focal)
        });
        let (a, b) = (a?, b?);
        let d = symmetric_difference(&a, &b);
        t.deviation(d as f64);
        t.check(d as f64 <= cfg.tol(0.0), || {
            let disc = DiscretizedLp::new(&problem, &focal).ok();
            let values = |frac: f64| -> Vec<f64> {
                disc.as_ref()
                    .map(|d| cands.iter().map(|c| d.lower_utility(&c.x, frac * min_guarantee)).collect())
                    .unwrap_or_default()
            };
            format!(
                "maximin {a:?} at L = {:.4} vs {b:?} at L = {:.4}; lower utilities {:?} vs {:?}",
                PUNISHMENT_FRACTIONS[0] * min_guarantee,
                PUNISHMENT_FRACTIONS[1] * min_guarantee,
                values(PUNISHMENT_FRACTIONS[0]),
                values(PUNISHMENT_FRACTIONS[1]),
            )
        });
        t.instances += 1;
    }
    Ok(t.finish())
}

/// Every property, in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<PropertyResult>, VerifyError> {
    let mut out = vec![conjugacy_and_sandwich(cfg)?];
    out.extend(main_path_agreement(cfg)?);
    out.push(precise_collapse(cfg)?);
    out.push(contamination_closed_form(cfg)?);
    out.push(pbox_refinement(cfg)?);
    out.push(robust_counterpart_equivalence(cfg)?);
    out.extend(decision_agreement(cfg)?);
    out.push(punishment_irrelevance(cfg)?);
    Ok(out)
}
