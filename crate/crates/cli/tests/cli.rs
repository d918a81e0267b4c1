use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn appellkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_appellkit"))
        .args(args)
        .env_remove("APPELLKIT_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn tables_write_exact_rationals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = appellkit(&["tables", "--kmax", "4", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ck = fs::read_to_string(dir.path().join("ck.csv")).unwrap();
    let column: Vec<&str> = ck
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(column, ["1", "1/3", "1/3", "1/5", "1/5"]);
    let tjk = fs::read_to_string(dir.path().join("tjk.csv")).unwrap();
    assert!(tjk.lines().any(|l| l == "2,0,1/2"));
    let weights = fs::read_to_string(dir.path().join("weights.csv")).unwrap();
    let header: Vec<&str> = weights.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "fock_b").unwrap();
    let row2: Vec<&str> = weights.lines().nth(3).unwrap().split(',').collect();
    // 2! / (3 * 4)
    assert_eq!(row2[col], "1/6");

    let dir0 = tempfile::tempdir().unwrap();
    let o = appellkit(&[
        "tables",
        "--kmax",
        "0",
        "--out",
        dir0.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(dir0.path().join("tjk.csv")).unwrap(),
        "k,j,T\n0,0,1\n"
    );
    assert_eq!(
        fs::read_to_string(dir0.path().join("ck.csv")).unwrap(),
        "k,c\n0,1\n"
    );

    let o = appellkit(&["tables", "--kmax", "65", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn appell_suite_passes_on_default_config() {
    let o = appellkit(&["verify", "--suite", "appell"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["config"]["degree_cap"], 12);
    for r in report["results"].as_array().unwrap() {
        assert!(r["statement"].as_str().is_some_and(|s| !s.is_empty()));
        assert!(r["instances"].as_u64().unwrap() > 0);
    }
}

#[test]
fn injected_gamma_fault_is_named() {
    let o = appellkit(&[
        "verify",
        "--suite",
        "operators",
        "--kmax",
        "4",
        "--inject-gamma-fault",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| r["identity"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["gamma-recurrence"]);
    assert_eq!(report["fault"]["gamma_1"], 0.9);
    assert!(stderr(&o).contains("FAIL gamma-recurrence"));

    let o = appellkit(&[
        "verify",
        "--suite",
        "operators",
        "--kmax",
        "4",
        "--inject-gamma-fault",
        "1.0",
    ]);
    assert_eq!(o.status.code(), Some(0), "γ_1 = 1 is the valid sequence");
}

#[test]
fn fmr_suite_reports_exact_table() {
    let o = appellkit(&["verify", "--suite", "fmr", "--kmax", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    assert!(csv.starts_with("identity,instances,max_defect,pass\n"));
    assert!(csv
        .lines()
        .any(|l| l.starts_with("transported-weight-forms,4,0e0,true")));
}

#[test]
fn config_from_environment_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(&path, r#"{"degree_cap": 5, "seed": 3, "format": "md"}"#).unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_appellkit"))
            .args(["verify", "--suite", "spaces"])
            .env("APPELLKIT_CONFIG", &path)
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert!(stdout(&a).starts_with("suite `spaces`, seed 3: pass"));
    assert_eq!(a.stdout, b.stdout);

    // The flag overrides the file.
    let o = appellkit(&[
        "verify",
        "--suite",
        "appell",
        "--config",
        path.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert!(stdout(&o).starts_with("suite `appell`, seed 9"));

    fs::write(&path, r#"{"degree_cap": 40}"#).unwrap();
    let o = appellkit(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("DomainError"));
    fs::write(&path, r#"{"unknown_key": 1}"#).unwrap();
    let o = appellkit(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kernel_values_and_domain_errors() {
    let o = appellkit(&["kernel", "--space", "fock", "--q", "0.5", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    let tail = v["tail_bound"].as_f64().unwrap();
    assert!((re - 0.25f64.exp()).abs() <= tail + 1e-15);

    let o = appellkit(&[
        "kernel",
        "--space",
        "hardy",
        "--q",
        "1.2,0,0,0",
        "--p",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("OutOfDomain"));

    let o = appellkit(&[
        "kernel",
        "--space",
        "hardy",
        "--grid",
        "-0.5:0.5:3",
        "--kmax",
        "80",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 10);
    let centre: Vec<f64> = csv
        .lines()
        .nth(5)
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(centre[8], 1.0);

    let o = appellkit(&["kernel", "--space", "nowhere", "--q", "0", "--p", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn transform_of_unit_hermite_vector() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("eta3.json");
    let output = dir.path().join("alpha.json");
    fs::write(&input, "[[0,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]").unwrap();
    for mode in ["coefficient", "quadrature"] {
        let o = appellkit(&[
            "transform",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
            "--mode",
            mode,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let alpha: Vec<[f64; 4]> =
            serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
        assert_eq!(alpha.len(), 4);
        assert!((alpha[3][0] - 1.0 / 6f64.sqrt()).abs() < 1e-14, "{mode}");
        assert!(alpha[..3].iter().flatten().all(|x| x.abs() < 1e-14));
    }
    let o = appellkit(&[
        "transform",
        "--input",
        "/nonexistent/in.json",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("IoError"));
}

#[test]
fn transport_table_formats() {
    let md = stdout(&appellkit(&["transport-table"]));
    assert!(md.contains("| Bergman | 1/(k+1) |"));
    assert_eq!(md.lines().filter(|l| l.ends_with("| yes |")).count(), 4);
    let json: Value = serde_json::from_str(&stdout(&appellkit(&[
        "transport-table",
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
    assert_eq!(json[3]["deficit_f1"], "1/2");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        appellkit(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        appellkit(&["kernel", "--space", "fock", "--q", "0"])
            .status
            .code(),
        Some(2)
    );
}
