use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(format!("{name}.plumb")).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumbcalc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn invariants_of_the_trefoil_file() {
    let out = run(&["invariants", &fixture("trefoil")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let class = &report["classes"][0];
    assert_eq!(class["upsilon"], serde_json::json!([["0", "0"], ["1", "-1"], ["2", "0"]]));
    assert_eq!(class["tau"], "1");
    assert_eq!(class["d"], "0");
    assert_eq!(class["upsilon_at_zero_equals_d"], true);
}

#[test]
fn rp3_reports_both_classes() {
    let out = run(&["invariants", &fixture("rp3"), "--spinc", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let d: Vec<&str> = report["classes"].as_array().unwrap().iter().map(|c| c["d"].as_str().unwrap()).collect();
    assert_eq!(d, ["1/4", "-1/4"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invariants", &fixture("notatree")]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "no/such/file.plumb"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", &fixture("rp3"), "--spinc", "7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", &fixture("rp3"), "--vertex", "v", "--t", "0"]).status.code(), Some(2));
    assert_eq!(run(&["homology", &fixture("trefoil"), "--t", "5/2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn indefinite_form_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("positive.plumb");
    std::fs::write(&path, "a 2\nv0 *\nedges:\na v0\n").unwrap();
    assert_eq!(run(&["invariants", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn homology_examples() {
    let out = run(&["homology", &fixture("unknot"), "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let class = &json(&out)["classes"][0];
    assert_eq!(class["barcode"][0], serde_json::json!([{ "birth": "0", "length": "inf" }]));
    assert_eq!(class["reduced"], serde_json::json!([]));

    for args in [vec!["--t", "1"], vec!["--t", "1", "--box", "0"]] {
        let mut full = vec!["homology", "trefoil"];
        full.extend(args);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(0));
        let class = &json(&out)["classes"][0];
        assert_eq!(class["free_birth"], "0");
        assert_eq!(class["upsilon"], "-1");
    }
}

#[test]
fn verify_examples() {
    let out = run(&["verify", &fixture("chain22"), "--vertex", "v", "--t", "2/3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);

    let out = run(&["verify", &fixture("trefoil"), "--vertex", "a", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "homology_matches_cubes" && c["pass"] == true));
}

#[test]
fn plot_rows() {
    let out = run(&["plot", &fixture("trefoil"), "--t-grid", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "t,upsilon,class,t_exact,upsilon_exact\n0,0,0,0,0\n0.5,-0.5,0,1/2,-1/2\n1,-1,0,1,-1\n1.5,-0.5,0,3/2,-1/2\n2,0,0,2,0\n");

    let out = run(&["plot", &fixture("unknot")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|row| row.split(',').nth(1) == Some("0")));

    let out = run(&["plot", &fixture("rp3")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let classes: std::collections::BTreeSet<&str> = text.lines().skip(1).map(|row| row.split(',').nth(2).unwrap()).collect();
    assert_eq!(classes.into_iter().collect::<Vec<_>>(), ["0", "1"]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["invariants", "t34", "--audit-radius", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&["invariants", "rp3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("t,upsilon,class,t_exact,upsilon_exact\n0,0.25,0,0,1/4\n"));
    assert_eq!(written, String::from_utf8(run(&["invariants", "rp3", "--format", "csv"]).stdout).unwrap());
}

#[test]
fn fixtures_are_listed() {
    let out = run(&["fixtures", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["trefoil", "double_cover", "chain22", "t25", "t34"] {
        assert!(text.contains(name));
    }
    let out = run(&["fixtures", "show", "trefoil"]);
    assert_eq!(out.status.code(), Some(0));
}
