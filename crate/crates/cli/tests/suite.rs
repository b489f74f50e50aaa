use std::collections::BTreeSet;

use wittlift_cli::{run_suite, Grid, Status, Suite, SuiteConfig, VerificationReport};

#[test]
fn default_grid_passes() {
    let report = run_suite(&SuiteConfig::default()).unwrap();
    assert!(!report.failed(), "{}", report.to_markdown());
    assert_eq!(report.exit_code(), 0);
    assert!(report.count(Status::Pass) > 100);
}

#[test]
fn each_grid_point_appears_once_per_check() {
    let config = SuiteConfig {
        grid: "p=2,3;r=1;j=0,1;m=1,2".parse().unwrap(),
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).unwrap();
    let mut seen = BTreeSet::new();
    for c in &report.checks {
        assert!(seen.insert((c.suite.clone(), c.name.clone(), c.params.clone())), "{c:?}");
    }
    let universal = report.checks.iter().filter(|c| c.suite == "universal" && c.name == "cocycle").count();
    assert_eq!(universal, 2 * 2 * 2);
}

#[test]
fn suites_run_in_fixed_order() {
    let config = SuiteConfig {
        grid: "p=2;r=1;j=0;m=1".parse().unwrap(),
        suites: vec![Suite::Lemma, Suite::Exactalg, Suite::Witt],
        samples: 5,
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).unwrap();
    assert_eq!(report.meta.suites, vec!["exactalg", "witt", "lemma"]);
    let order: Vec<&str> = report.checks.iter().map(|c| c.suite.as_str()).collect();
    let mut sorted = order.clone();
    sorted.sort_by_key(|s| report.meta.suites.iter().position(|x| x == s));
    assert_eq!(order, sorted);
}

#[test]
fn same_seed_same_outcome() {
    let config = SuiteConfig {
        grid: "p=2;r=1;j=0;m=1".parse().unwrap(),
        suites: vec![Suite::Exactalg, Suite::Hopf],
        samples: 10,
        seed: 7,
    };
    let a = run_suite(&config).unwrap();
    let b = run_suite(&config).unwrap();
    let strip = |r: &VerificationReport| {
        r.checks
            .iter()
            .map(|c| (c.name.clone(), c.params.clone(), c.status, c.witness.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn report_round_trips() {
    let config = SuiteConfig {
        grid: "p=2;r=1;j=0;m=1".parse().unwrap(),
        suites: vec![Suite::Universal, Suite::Lemma],
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).unwrap();
    let parsed = VerificationReport::from_json(&report.to_json()).unwrap();
    assert_eq!(parsed, report);
}

#[test]
fn grid_parsing() {
    let g: Grid = "p=2,3;r=1..3;m=2".parse().unwrap();
    assert_eq!(g.p, vec![2, 3]);
    assert_eq!(g.r, vec![1, 2, 3]);
    assert_eq!(g.j, Grid::default().j);
    assert_eq!(g.m, vec![2]);
    assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
    assert!("q=2".parse::<Grid>().is_err());
    assert!("p=x".parse::<Grid>().is_err());
    let empty = SuiteConfig {
        suites: vec![],
        ..SuiteConfig::default()
    };
    assert!(run_suite(&empty).is_err());
}

#[test]
fn over_cap_points_are_skipped() {
    let config = SuiteConfig {
        grid: "p=3;r=2;j=1;m=1".parse().unwrap(),
        suites: vec![Suite::Universal],
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).unwrap();
    assert!(report.checks.iter().all(|c| c.status == Status::Skipped));
    assert!(!report.failed());
}
