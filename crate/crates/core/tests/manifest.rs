use appellkit::verify::{identities, run_suite, RunConfig, Suite};

#[test]
fn every_identity_runs_and_passes() {
    let report = run_suite(Suite::All, &RunConfig::default(), None).unwrap();
    println!("{}", report.to_markdown());
    let names: Vec<_> = identities().iter().map(|i| i.name).collect();
    let reported: Vec<_> = report.results.iter().map(|r| r.identity.as_str()).collect();
    assert_eq!(names, reported);
    for r in &report.results {
        assert!(r.instances > 0, "{} checked nothing", r.identity);
        assert!(
            r.pass,
            "{} failed: defect {:e} {:?}",
            r.identity, r.max_defect, r.detail
        );
    }
    assert!(report.pass);
}

#[test]
fn reports_are_deterministic_per_seed() {
    let config = RunConfig {
        degree_cap: 6,
        seed: 17,
        ..RunConfig::default()
    };
    let a = run_suite(Suite::Spaces, &config, None).unwrap();
    let b = run_suite(Suite::Spaces, &config, None).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn suites_partition_the_manifest() {
    let config = RunConfig {
        degree_cap: 4,
        ..RunConfig::default()
    };
    let total: usize = [Suite::Appell, Suite::Fmr]
        .iter()
        .map(|&s| run_suite(s, &config, None).unwrap().results.len())
        .sum();
    let expected = identities()
        .iter()
        .filter(|i| matches!(i.suite, Suite::Appell | Suite::Fmr))
        .count();
    assert_eq!(total, expected);
}
