use proptest::prelude::*;

use imprecise_lp::cli::config::{DecisionConfig, Maximality, ProblemConfig, ScalarConfig, SolveConfig};
use imprecise_lp::cli::RunConfig;
use imprecise_lp::decision::{decide, CandidateOptions, CandidateSet, DecisionOptions};
use imprecise_lp::harness::evaluate_regret;
use imprecise_lp::problem::{DecisionVector, Realization, UncertainLp};
use imprecise_lp::uncertainty::{
    lower_expectation, upper_expectation, Contamination, DiscreteDistribution, EvaluationPlan, Interval,
    JointModel, Monotonicity, UncertainScalar,
};

fn interval() -> impl Strategy<Value = (f64, f64)> {
    (-5.0..5.0f64, 0.0..3.0f64).prop_map(|(lo, w)| (lo, lo + w))
}

fn cubic(v: &[f64]) -> f64 {
    v[0].powi(3) + v[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interval_expectations_hit_endpoints((lo, hi) in interval()) {
        let joint = JointModel::single(UncertainScalar::interval(lo, hi).unwrap());
        let plan = EvaluationPlan::monotone(vec![Monotonicity::Nondecreasing]);
        let l = lower_expectation(&joint, &cubic, &plan).unwrap();
        let u = upper_expectation(&joint, &cubic, &plan).unwrap();
        prop_assert_eq!(l, cubic(&[lo]));
        prop_assert_eq!(u, cubic(&[hi]));
    }

    #[test]
    fn contamination_widens_with_epsilon(
        center in 0.0..1.0f64,
        e1 in 0.0..1.0f64,
        e2 in 0.0..1.0f64,
    ) {
        let (small, large) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let support = Interval::new(-1.0, 2.0).unwrap();
        let plan = EvaluationPlan::monotone(vec![Monotonicity::Nondecreasing]);
        let bounds = |eps: f64| {
            let c = Contamination::new(DiscreteDistribution::dirac(center).unwrap(), eps, support).unwrap();
            let joint = JointModel::single(UncertainScalar::Contamination(c));
            (
                lower_expectation(&joint, &cubic, &plan).unwrap(),
                upper_expectation(&joint, &cubic, &plan).unwrap(),
            )
        };
        let (l1, u1) = bounds(small);
        let (l2, u2) = bounds(large);
        prop_assert!(l2 <= l1 + 1e-12 && l1 <= u1 + 1e-12 && u1 <= u2 + 1e-12);
        let exact = (1.0 - small) * cubic(&[center]) + small * cubic(&[-1.0]);
        prop_assert!((l1 - exact).abs() <= 1e-9);
    }

    #[test]
    fn maximin_is_maximal_on_interval_problems(
        u in prop::collection::vec((1.0..3.0f64, 0.0..1.0f64), 2),
        y in prop::collection::vec((0.5..2.0f64, 0.0..0.5f64), 4),
        z in prop::collection::vec((2.0..6.0f64, 0.0..1.5f64), 2),
    ) {
        let iv = |(lo, w): (f64, f64)| UncertainScalar::interval(lo, lo + w).unwrap();
        let problem = UncertainLp::new(
            u.into_iter().map(iv).collect(),
            y.into_iter().map(iv).collect(),
            z.into_iter().map(iv).collect(),
            vec![Interval::new(0.0, 4.0).unwrap(); 2],
        ).unwrap();
        let cands = CandidateSet::build(&problem, &CandidateOptions { grid_per_axis: 5, include_vertices: true }).unwrap();
        let out = decide(&problem, &cands, &DecisionOptions::default()).unwrap();
        prop_assert!(!out.maximin_indices.is_empty());
        for i in &out.maximin_indices {
            prop_assert!(out.maximal_indices.contains(i));
        }
        for c in &out.candidates {
            prop_assert!(c.lower_utility >= out.punishment - 1e-12);
            prop_assert!(c.lower_utility <= c.upper_utility + 1e-12);
        }
    }

    #[test]
    fn regret_is_nonnegative(
        u in prop::collection::vec(-1.0..3.0f64, 2),
        y in prop::collection::vec(-0.5..2.0f64, 4),
        z in prop::collection::vec(0.0..6.0f64, 2),
        x in prop::collection::vec(0.0..4.0f64, 2),
    ) {
        let bounds = vec![Interval::new(0.0, 4.0).unwrap(); 2];
        let truth = Realization::new(u, y, z).unwrap();
        let x = DecisionVector::new(x, &bounds).unwrap();
        if let Some(r) = evaluate_regret(&x, &truth, &bounds).unwrap() {
            prop_assert!(r >= 0.0);
        }
    }

    #[test]
    fn solve_configs_round_trip(
        lo in prop::collection::vec(-10.0..10.0f64, 3),
        eps in 0.0..1.0f64,
        n_focal in 1usize..64,
        strict in any::<bool>(),
    ) {
        let cfg = RunConfig::Solve(SolveConfig {
            decision: DecisionConfig {
                n_focal,
                grid_per_axis: 7,
                include_vertices: !strict,
                tie_tol: 1e-9,
                maximality: if strict { Maximality::Strict } else { Maximality::Standard },
            },
            problem: ProblemConfig {
                u: vec![ScalarConfig::Interval { lo: lo[0], hi: lo[0] + 1.0 }],
                y: vec![vec![ScalarConfig::Point { value: lo[1] }]],
                z: vec![ScalarConfig::Contamination {
                    center: vec![[lo[2], 0.25], [lo[2] + 0.5, 0.75]],
                    epsilon: eps,
                    support: [lo[2] - 1.0, lo[2] + 1.5],
                }],
                x_bounds: vec![[0.0, 3.5]],
            },
        });
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
    }
}
