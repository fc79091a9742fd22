use super::*;
use crate::decision::{lower_utility, CandidateOptions};
use crate::uncertainty::{FocalCount, UncertainScalar};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

/// n = 2, m = 2, three features; right-hand sides large enough that the
/// feasibility shift never triggers.
pub(super) fn task(noise: f64, train: usize, test: usize, seed: u64) -> TaskSpec {
    TaskSpec {
        n: 2,
        m: 2,
        feature_dim: 3,
        true_weights: vec![
            vec![2.0, 1.0, -0.5, 0.3],
            vec![1.5, -0.2, 0.8, 0.5],
            vec![1.0, 0.5, 0.2, -0.1],
            vec![0.8, -0.3, 0.4, 0.6],
            vec![1.2, 0.3, -0.2, 0.1],
            vec![0.6, 0.2, 0.5, -0.3],
            vec![6.0, 1.0, -1.0, 0.5],
            vec![5.0, -0.5, 1.5, 1.0],
        ],
        noise_scale: noise,
        x_bounds: vec![iv(0.0, 4.0), iv(0.0, 4.0)],
        train_size: train,
        test_size: test,
        seed,
    }
}

#[test]
fn noiseless_parameters_are_affine() {
    let spec = task(0.0, 10, 5, 1);
    let data = generate_dataset(&spec).unwrap();
    for s in data.train.iter().chain(&data.test) {
        let flat = s.truth.to_flat();
        for (w, v) in spec.true_weights.iter().zip(&flat) {
            assert_eq!(*v, data::affine(w, &s.features));
        }
    }
}

#[test]
fn dataset_is_deterministic() {
    let spec = task(0.3, 20, 10, 9);
    assert_eq!(generate_dataset(&spec).unwrap(), generate_dataset(&spec).unwrap());
    let other = TaskSpec { seed: 10, ..spec.clone() };
    assert_ne!(generate_dataset(&spec).unwrap(), generate_dataset(&other).unwrap());
}

#[test]
fn feasibility_shift_keeps_anchor_feasible() {
    let mut spec = task(2.0, 50, 50, 3);
    for row in spec.true_weights[6..].iter_mut() {
        row[0] = -3.0;
    }
    let data = generate_dataset(&spec).unwrap();
    let anchor = [0.2, 0.2];
    for s in data.train.iter().chain(&data.test) {
        assert!(decision::is_feasible_at(&anchor, &s.truth));
    }
}

#[test]
fn minimal_training_set_interpolates() {
    let spec = task(0.5, 4, 1, 2);
    let data = generate_dataset(&spec).unwrap();
    let p = fit_point_predictor(&data.train).unwrap();
    assert!(p.residuals.iter().flatten().all(|r| r.abs() <= 1e-9));
}

#[test]
fn noiseless_fit_recovers_weights() {
    let spec = task(0.0, 30, 1, 4);
    let p = fit_point_predictor(&generate_dataset(&spec).unwrap().train).unwrap();
    assert!(p.residuals.iter().flatten().all(|r| r.abs() <= 1e-9));
    for (w, t) in p.weights.iter().flatten().zip(spec.true_weights.iter().flatten()) {
        assert!((w - t).abs() <= 1e-8, "{w} vs {t}");
    }
}

#[test]
fn duplicated_constant_feature_is_rank_deficient() {
    let spec = task(0.0, 10, 1, 5);
    let mut train = generate_dataset(&spec).unwrap().train;
    for s in train.iter_mut() {
        s.features = vec![1.0, 1.0, s.features[2]];
    }
    assert!(matches!(fit_point_predictor(&train), Err(HarnessError::RankDeficient { .. })));
}

#[test]
fn residual_spread_matches_noise() {
    let spec = task(0.1, 200, 1, 6);
    let p = fit_point_predictor(&generate_dataset(&spec).unwrap().train).unwrap();
    let r = &p.residuals[0];
    let sd = (r.iter().map(|v| v * v).sum::<f64>() / (r.len() - 4) as f64).sqrt();
    assert!((sd - 0.1).abs() <= 0.02, "{sd}");
    // regression anchor from the first verified run
    assert!((sd - RESIDUAL_SD_ANCHOR).abs() <= 1e-12, "{sd}");
}

const RESIDUAL_SD_ANCHOR: f64 = 0.10411115431609186;

#[test]
fn full_interval_band() {
    let m = parameter_model(5.0, &[-1.0, 0.0, 1.0], &ImprecisePredictionMethod::IntervalBand { coverage: 1.0 });
    assert_eq!(m.unwrap(), UncertainScalar::Interval(iv(4.0, 6.0)));
}

#[test]
fn point_only_is_the_prediction() {
    let m = parameter_model(5.0, &[], &ImprecisePredictionMethod::PointOnly).unwrap();
    assert_eq!(m, UncertainScalar::point(5.0).unwrap());
}

#[test]
fn band_methods_need_two_residuals() {
    let m = parameter_model(5.0, &[0.1], &ImprecisePredictionMethod::IntervalBand { coverage: 0.5 });
    assert!(matches!(m, Err(HarnessError::InsufficientData { needed: 2, got: 1 })));
}

#[test]
fn ks_band_width() {
    let h = ks_half_width(0.05, 100);
    assert!((h - (40f64.ln() / 200.0).sqrt()).abs() < 1e-15);
    assert!((h - 0.1358).abs() < 1e-4);
    let residuals: Vec<f64> = (0..100).map(|k| (k as f64 - 49.5) / 50.0).collect();
    let m = parameter_model(0.0, &residuals, &ImprecisePredictionMethod::PBoxBand { ks_alpha: 0.05 }).unwrap();
    let UncertainScalar::PBox(pb) = m else { panic!("expected a p-box") };
    let mut checked = 0;
    for k in 0..=200 {
        let v = -1.0 + k as f64 / 100.0;
        let (lo, hi) = (pb.lower().eval(v), pb.upper().eval(v));
        if lo > 0.0 && hi < 1.0 {
            assert!((hi - lo - 2.0 * h).abs() < 1e-12, "{v}: {lo} {hi}");
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn ks_width_shrinks_with_samples() {
    let widths: Vec<f64> = (2..500).map(|n| ks_half_width(0.05, n)).collect();
    assert!(widths.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn contamination_band_contains_the_prediction() {
    let m = parameter_model(2.0, &[0.5, 0.7], &ImprecisePredictionMethod::ContaminationBand { epsilon: 0.2 });
    let UncertainScalar::Contamination(c) = m.unwrap() else { panic!() };
    assert_eq!(c.support(), iv(2.0, 2.7));
}

#[test]
fn missing_or_bad_parameters_rejected() {
    for m in [
        ImprecisePredictionMethod::IntervalBand { coverage: 0.0 },
        ImprecisePredictionMethod::IntervalBand { coverage: 1.5 },
        ImprecisePredictionMethod::ContaminationBand { epsilon: -0.1 },
        ImprecisePredictionMethod::PBoxBand { ks_alpha: 1.0 },
    ] {
        assert!(m.validate().is_err(), "{m:?}");
    }
}

#[test]
fn wider_coverage_never_raises_lower_utility() {
    let spec = task(0.5, 40, 5, 8);
    let data = generate_dataset(&spec).unwrap();
    let p = fit_point_predictor(&data.train).unwrap();
    for s in &data.test {
        let mut previous: Option<Vec<f64>> = None;
        let mut supports: Option<Vec<Interval>> = None;
        for coverage in [0.2, 0.5, 0.8, 1.0] {
            let method = ImprecisePredictionMethod::IntervalBand { coverage };
            let problem = build_imprecise_prediction(&p, &s.features, &method, &spec.x_bounds).unwrap();
            let sup: Vec<Interval> = problem.entries().map(|e| e.support()).collect();
            if let Some(prev) = &supports {
                assert!(prev.iter().zip(&sup).all(|(a, b)| b.contains_interval(a)));
            }
            let values: Vec<f64> = [[0.5, 0.5], [1.0, 0.2], [0.2, 1.5]]
                .iter()
                .map(|x| {
                    let x = problem.decision(x.to_vec()).unwrap();
                    lower_utility(&problem, &x, 0.05, &FocalCount::default()).unwrap()
                })
                .collect();
            if let Some(prev) = &previous {
                assert!(prev.iter().zip(&values).all(|(a, b)| *b <= *a + TOL));
            }
            previous = Some(values);
            supports = Some(sup);
        }
    }
}

#[test]
fn smaller_alpha_widens_pbox_support_and_lowers_utility() {
    let spec = task(0.5, 40, 3, 8);
    let data = generate_dataset(&spec).unwrap();
    let p = fit_point_predictor(&data.train).unwrap();
    let x = [0.8, 0.6];
    for s in &data.test {
        let values: Vec<f64> = [0.5, 0.2, 0.05, 0.01]
            .iter()
            .map(|&ks_alpha| {
                let method = ImprecisePredictionMethod::PBoxBand { ks_alpha };
                let problem = build_imprecise_prediction(&p, &s.features, &method, &spec.x_bounds).unwrap();
                let x = problem.decision(x.to_vec()).unwrap();
                lower_utility(&problem, &x, 0.05, &FocalCount::default()).unwrap()
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0] + TOL), "{values:?}");
    }
}

fn one_d(u: f64, y: f64, z: f64) -> Realization {
    Realization::new(vec![u], vec![y], vec![z]).unwrap()
}

#[test]
fn regret_examples() {
    let truth = one_d(2.0, 1.0, 4.0);
    let bounds = [iv(0.0, 10.0)];
    let dv = |v: f64| DecisionVector::new(vec![v], &bounds).unwrap();
    assert_eq!(evaluate_regret(&dv(4.0), &truth, &bounds).unwrap(), Some(0.0));
    assert_eq!(evaluate_regret(&dv(2.0), &truth, &bounds).unwrap(), Some(4.0));
    assert_eq!(evaluate_regret(&dv(6.0), &truth, &bounds).unwrap(), Some(8.0));
}

#[test]
fn infeasible_truth_is_skipped() {
    let truth = one_d(2.0, 1.0, -1.0);
    let bounds = [iv(0.0, 10.0)];
    let x = DecisionVector::new(vec![0.0], &bounds).unwrap();
    assert_eq!(evaluate_regret(&x, &truth, &bounds).unwrap(), None);
}

#[test]
fn noiseless_point_pipeline_has_no_regret() {
    let spec = task(0.0, 20, 10, 11);
    let report = run_experiment(&spec, &[ImprecisePredictionMethod::PointOnly], &ExperimentSettings::default()).unwrap();
    let s = &report.methods[0];
    assert_eq!(s.evaluated, 10);
    // the true optimum is a nominal vertex of the exact prediction
    assert!(s.worst_case_regret.unwrap() <= 1e-9, "{s:?}");
}

#[test]
fn experiment_is_deterministic_and_ordered() {
    let spec = task(1.0, 15, 6, 12);
    let methods = [
        ImprecisePredictionMethod::PointOnly,
        ImprecisePredictionMethod::IntervalBand { coverage: 0.9 },
        ImprecisePredictionMethod::ContaminationBand { epsilon: 0.2 },
        ImprecisePredictionMethod::PBoxBand { ks_alpha: 0.1 },
    ];
    let settings = ExperimentSettings {
        candidates: CandidateOptions { grid_per_axis: 6, include_vertices: true },
        ..ExperimentSettings::default()
    };
    let a = run_experiment(&spec, &methods, &settings).unwrap();
    let b = run_experiment(&spec, &methods, &settings).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let names: Vec<&str> = a.methods.iter().map(|m| m.method.as_str()).collect();
    assert_eq!(names, methods.iter().map(|m| m.name()).collect::<Vec<_>>());
    assert!(a.rows.iter().filter_map(|r| r.regret).all(|r| r >= -1e-9));
    let maximal = ExperimentSettings { selector: Selector::MaximalThenFirst, ..settings };
    let c = run_experiment(&spec, &methods, &maximal).unwrap();
    assert_eq!(c.rows.len(), 24);
}
