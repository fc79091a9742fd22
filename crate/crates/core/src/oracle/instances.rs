//! Seeded random instances for the verification suite: models, test
//! functions with known Lipschitz bounds, and small uncertain LPs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{CandidateOptions, CandidateSet, DecisionError};
use crate::problem::UncertainLp;
use crate::uncertainty::{
    Cdf, Contamination, DiscreteDistribution, Interval, JointModel, PBox, UncertainScalar,
};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    Point,
    Interval,
    Contamination,
    PBox,
}

impl ModelFamily {
    pub const IMPRECISE: [ModelFamily; 3] =
        [ModelFamily::Interval, ModelFamily::Contamination, ModelFamily::PBox];
    pub const ALL: [ModelFamily; 4] =
        [ModelFamily::Point, ModelFamily::Interval, ModelFamily::Contamination, ModelFamily::PBox];
}

fn interval(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("generated intervals are ordered")
}

/// Sorted distinct draws from `support`, `count` of them.
fn sorted_draws(rng: &mut InstanceRng, support: Interval, count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..count).map(|_| rng.random_range(support.lo()..=support.hi())).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn random_contamination(rng: &mut InstanceRng, support: Interval) -> Contamination {
    let count = rng.random_range(1..=3);
    let values = if support.is_degenerate() {
        vec![support.lo()]
    } else {
        sorted_draws(rng, support, count)
    };
    let weights: Vec<f64> = values.iter().map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut atoms: Vec<(f64, f64)> = values.iter().zip(&weights).map(|(v, w)| (*v, w / total)).collect();
    let head: f64 = atoms[..atoms.len() - 1].iter().map(|a| a.1).sum();
    let last = atoms.len() - 1;
    atoms[last].1 = 1.0 - head;
    let eps = rng.random_range(0.05..0.6);
    Contamination::new(DiscreteDistribution::new(atoms).expect("normalized"), eps, support)
        .expect("atoms inside support")
}

pub fn random_pbox(rng: &mut InstanceRng, support: Interval) -> PBox {
    let interior = rng.random_range(0..=3);
    let mut xs = vec![support.lo()];
    xs.extend(sorted_draws(rng, support, interior).into_iter().filter(|v| *v > support.lo() && *v < support.hi()));
    xs.push(support.hi());
    xs.dedup();
    let mut ps: Vec<f64> = (1..xs.len() - 1).map(|_| rng.random_range(0.0..1.0)).collect();
    ps.sort_by(f64::total_cmp);
    let mut base = vec![0.0];
    base.extend(ps);
    base.push(1.0);
    let width = rng.random_range(0.0..0.3);
    let upper: Vec<(f64, f64)> = xs.iter().zip(&base).map(|(x, p)| (*x, (p + width).min(1.0))).collect();
    let mut lower: Vec<(f64, f64)> = xs.iter().zip(&base).map(|(x, p)| (*x, (p - width).max(0.0))).collect();
    let last = lower.len() - 1;
    lower[last].1 = 1.0;
    let (lower, upper) = if rng.random_bool(0.5) {
        (Cdf::linear(lower), Cdf::linear(upper))
    } else {
        (Cdf::step(lower), Cdf::step(upper))
    };
    PBox::new(support, lower.expect("valid knots"), upper.expect("valid knots")).expect("ordered bounds")
}

/// A model of `family` whose support is `support` (a point model takes the
/// support's midpoint).
pub fn random_scalar(rng: &mut InstanceRng, family: ModelFamily, support: Interval) -> UncertainScalar {
    match family {
        ModelFamily::Point => UncertainScalar::point(support.mid()).expect("finite"),
        ModelFamily::Interval => UncertainScalar::Interval(support),
        ModelFamily::Contamination => UncertainScalar::Contamination(random_contamination(rng, support)),
        ModelFamily::PBox => UncertainScalar::PBox(random_pbox(rng, support)),
    }
}

/// One or two entries of random families on supports inside `[-2, 2]`.
pub fn random_joint(rng: &mut InstanceRng, entries: usize) -> JointModel {
    let models = (0..entries)
        .map(|_| {
            let family = ModelFamily::ALL[rng.random_range(0..4)];
            let lo = rng.random_range(-2.0..1.5);
            let hi = rng.random_range(lo..2.0);
            if family == ModelFamily::Point {
                UncertainScalar::point(lo).expect("finite")
            } else {
                random_scalar(rng, family, interval(lo, hi))
            }
        })
        .collect();
    JointModel::new(models).expect("nonempty")
}

/// `f(v) = Σ_i [a_i sin(b_i v_i + c_i) + d_i |v_i − e_i|] + g · sin(v_0 + v_1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    terms: Vec<[f64; 5]>,
    coupling: f64,
}

impl TestFunction {
    pub fn random(rng: &mut InstanceRng, dims: usize) -> Self {
        let terms = (0..dims)
            .map(|_| {
                [
                    rng.random_range(-2.0..2.0),
                    rng.random_range(0.5..4.0),
                    rng.random_range(0.0..6.3),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-2.0..2.0),
                ]
            })
            .collect();
        let coupling = if dims > 1 { rng.random_range(-1.0..1.0) } else { 0.0 };
        Self { terms, coupling }
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        let mut s: f64 = self
            .terms
            .iter()
            .zip(v)
            .map(|([a, b, c, d, e], x)| a * (b * x + c).sin() + d * (x - e).abs())
            .sum();
        if self.terms.len() > 1 {
            s += self.coupling * (v[0] + v[1]).sin();
        }
        s
    }

    /// Per-coordinate Lipschitz bounds.
    pub fn lipschitz(&self) -> Vec<f64> {
        self.terms
            .iter()
            .map(|[a, b, _, d, _]| (a * b).abs() + d.abs() + self.coupling.abs())
            .collect()
    }
}

/// Shape of a random uncertain LP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemShape {
    pub n: usize,
    pub m: usize,
    pub family: ModelFamily,
    /// Probability that an entry uses `family` rather than a point.
    pub uncertain_prob: f64,
    /// At most this many entries (over `u`, `y` and `z`) are uncertain.
    pub max_uncertain: usize,
}

/// A random problem with positive objective coefficients, positive
/// constraint coefficients and positive right-hand sides.
pub fn random_problem(rng: &mut InstanceRng, shape: ProblemShape) -> UncertainLp {
    let ProblemShape { n, m, family, uncertain_prob, max_uncertain } = shape;
    let total = n + m * n + m;
    let mut flagged: Vec<usize> = (0..total).filter(|_| rng.random_bool(uncertain_prob)).collect();
    while flagged.len() > max_uncertain {
        let k = rng.random_range(0..flagged.len());
        flagged.remove(k);
    }
    let ranges = |i: usize| {
        if i < n {
            ((1.0, 3.0), 0.5)
        } else if i < n + m * n {
            ((0.5, 2.0), 0.5)
        } else {
            ((2.0, 6.0), 1.5)
        }
    };
    let entries: Vec<UncertainScalar> = (0..total)
        .map(|i| {
            let (center, half) = ranges(i);
            let c = rng.random_range(center.0..center.1);
            if flagged.contains(&i) {
                let h = rng.random_range(0.05..half);
                random_scalar(rng, family, interval(c - h, c + h))
            } else {
                UncertainScalar::point(c).expect("finite")
            }
        })
        .collect();
    let bounds = (0..n).map(|_| interval(0.0, rng.random_range(2.0..5.0))).collect();
    UncertainLp::from_entries(n, m, entries, bounds).expect("consistent dimensions")
}

/// Grid plus nominal vertices, filtered to strictly positive guarantees.
pub fn small_candidates(problem: &UncertainLp, grid_per_axis: usize) -> Result<CandidateSet, DecisionError> {
    let opts = CandidateOptions { grid_per_axis, include_vertices: true };
    CandidateSet::build(problem, &opts)?.retain_positive(problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_joint(&mut rng(7), 2);
        let b = random_joint(&mut rng(7), 2);
        assert_eq!(a, b);
        let shape = ProblemShape { n: 2, m: 2, family: ModelFamily::PBox, uncertain_prob: 0.5, max_uncertain: 3 };
        assert_eq!(random_problem(&mut rng(3), shape), random_problem(&mut rng(3), shape));
    }

    #[test]
    fn generated_models_validate() {
        let mut r = rng(11);
        for _ in 0..200 {
            let j = random_joint(&mut r, 2);
            for e in j.entries() {
                e.to_ds(5).unwrap();
            }
        }
    }

    #[test]
    fn lipschitz_bound_holds_numerically() {
        let mut r = rng(5);
        for _ in 0..50 {
            let f = TestFunction::random(&mut r, 2);
            let k = f.lipschitz();
            for _ in 0..50 {
                let p = [r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)];
                let h = 1e-4;
                let dx = (f.eval(&[p[0] + h, p[1]]) - f.eval(&p)).abs() / h;
                let dy = (f.eval(&[p[0], p[1] + h]) - f.eval(&p)).abs() / h;
                assert!(dx <= k[0] + 1e-6 && dy <= k[1] + 1e-6);
            }
        }
    }
}
