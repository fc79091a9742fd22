use super::config::*;
use super::*;

const CONFIGS: [&str; 4] = [
    include_str!("../../configs/solve.toml"),
    include_str!("../../configs/solve_pbox.toml"),
    include_str!("../../configs/experiment.toml"),
    include_str!("../../configs/verify.toml"),
];

#[test]
fn shipped_configs_parse_resolve_and_round_trip() {
    for text in CONFIGS {
        let cfg = RunConfig::parse(text).unwrap();
        let again = RunConfig::parse(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
        match &cfg {
            RunConfig::Solve(s) => {
                s.problem.resolve().unwrap();
                s.decision.resolve("decision").unwrap();
            }
            RunConfig::Experiment(e) => {
                e.resolve().unwrap();
            }
            RunConfig::Verify(v) => {
                v.resolve(0).unwrap();
            }
        }
    }
}

fn experiment_with_methods(methods: &str) -> String {
    let base = CONFIGS[2];
    let cut = base.find("[[methods]]").unwrap();
    format!("{}{methods}", &base[..cut])
}

#[test]
fn missing_decision_parameters_are_errors() {
    let text = experiment_with_methods("[[methods]]\nkind = \"interval_band\"\n");
    let e = RunConfig::parse(&text).unwrap_err();
    assert!(e.message.contains("coverage"), "{e}");
    let text = experiment_with_methods("[[methods]]\nkind = \"contamination_band\"\n");
    assert!(RunConfig::parse(&text).unwrap_err().message.contains("epsilon"));
    let text = experiment_with_methods("[[methods]]\nkind = \"pbox_band\"\n");
    assert!(RunConfig::parse(&text).unwrap_err().message.contains("ks_alpha"));
    let text = CONFIGS[0].replace("n_focal = 8\n", "");
    assert!(RunConfig::parse(&text).unwrap_err().message.contains("n_focal"));
}

#[test]
fn unknown_fields_and_modes_are_rejected() {
    let text = CONFIGS[0].replace("tie_tol = 1e-9", "tie_tol = 1e-9\ntie_tolerance = 0.1");
    assert!(RunConfig::parse(&text).unwrap_err().message.contains("tie_tolerance"));
    let text = CONFIGS[0].replace("mode = \"solve\"", "mode = \"optimize\"");
    assert!(RunConfig::parse(&text).is_err());
}

#[test]
fn invalid_values_name_their_path() {
    let text = CONFIGS[2].replace("coverage = 0.9", "coverage = 1.5");
    let e = match RunConfig::parse(&text).unwrap() {
        RunConfig::Experiment(c) => c.resolve().unwrap_err(),
        _ => unreachable!(),
    };
    assert_eq!(e.path, "methods[1].coverage");

    let text = CONFIGS[0].replace("lo = 1.0, hi = 2.0 }]]", "lo = 3.0, hi = 2.0 }]]");
    let e = match RunConfig::parse(&text).unwrap() {
        RunConfig::Solve(c) => c.problem.resolve().unwrap_err(),
        _ => unreachable!(),
    };
    assert_eq!(e.path, "problem.y[0][0].lo");

    let text = CONFIGS[0].replace("epsilon = 0.2", "epsilon = 1.2");
    let e = match RunConfig::parse(&text).unwrap() {
        RunConfig::Solve(c) => c.problem.resolve().unwrap_err(),
        _ => unreachable!(),
    };
    assert_eq!(e.path, "problem.z[0]");

    let text = CONFIGS[2].replace("train_size = 200", "train_size = 2");
    let e = match RunConfig::parse(&text).unwrap() {
        RunConfig::Experiment(c) => c.resolve().unwrap_err(),
        _ => unreachable!(),
    };
    assert!(e.path.starts_with("task."), "{e}");
}

#[test]
fn solve_outcome_is_json_with_both_sets() {
    let RunConfig::Solve(cfg) = RunConfig::parse(CONFIGS[0]).unwrap() else { unreachable!() };
    let text = solve(&cfg).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(!v["maximin_set"].as_array().unwrap().is_empty());
    assert!(!v["maximal_set"].as_array().unwrap().is_empty());
    assert_eq!(v["maximality_mode"], "standard");
}

#[test]
fn csv_layout() {
    use crate::harness::InstanceRow;
    let report = RegretReport {
        seed: 1,
        instances: 2,
        selector: Selector::Maximin,
        methods: vec![],
        rows: vec![
            InstanceRow {
                instance: 0,
                method: "point_only".into(),
                status: RowStatus::Ok,
                regret: Some(0.25),
                vacuous: Some(false),
                decision: Some(vec![1.0, 0.5]),
                error: None,
            },
            InstanceRow {
                instance: 1,
                method: "point_only".into(),
                status: RowStatus::SkippedInfeasible,
                regret: None,
                vacuous: None,
                decision: None,
                error: None,
            },
        ],
    };
    assert_eq!(
        regret_csv(&report, 2),
        "instance,method,status,regret,vacuous,x0,x1\n\
         0,point_only,ok,0.25,false,1,0.5\n\
         1,point_only,skipped_infeasible,,,,\n"
    );
}

#[test]
fn atomic_write_replaces_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.json");
    write_atomic(&p, b"one").unwrap();
    write_atomic(&p, b"two").unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), b"two");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let e = write_atomic(&dir.path().join("missing/out.json"), b"x").unwrap_err();
    assert_eq!(e.exit_code(), 2);
}
