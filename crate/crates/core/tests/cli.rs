use std::path::Path;
use std::process::{Command, Output};

use canonstrip::cli::Report;

fn canonstrip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canonstrip"))
        .args(args)
        .env_remove("CANONSTRIP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn gp_json_round_trips_byte_for_byte() {
    for args in [
        &["gp", "--type", "E6", "--node", "4", "--format", "json"][..],
        &[
            "ci",
            "--type",
            "A",
            "--rank",
            "4",
            "--node",
            "1",
            "--degrees",
            "2,2",
            "--format",
            "json",
            "--digits",
            "6",
        ],
        &[
            "cover", "--type", "A", "--rank", "2", "--node", "1", "--degree", "1", "--format",
            "json",
        ],
    ] {
        let out = canonstrip(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = stdout(&out);
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report.to_json().unwrap(), text);
    }
}

#[test]
fn e6_report_fields() {
    let out = canonstrip(&["gp", "--type", "E6", "--node", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 29);
    assert_eq!(v["index"], 7);
    assert_eq!(v["factored"].as_array().unwrap().len(), 3);
    assert_eq!(v["verdicts"]["TCS"]["status"], "holds");
    assert_eq!(v["verdicts"]["CL"]["status"], "fails");
    assert_eq!(v["coxeter"]["h"], 12);
    assert_eq!(v["boundary_contact"], true);
}

#[test]
fn ci_del_pezzo_on_line() {
    let out = canonstrip(&[
        "ci",
        "--type",
        "A",
        "--rank",
        "4",
        "--node",
        "1",
        "--degrees",
        "2,2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["index"], 1);
    assert_eq!(v["residual_on_line"], "certified");
    assert_eq!(v["residual_line"], "-1/2");
}

#[test]
fn abelian_curve_and_violation() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write_spec(
        dir.path(),
        "curve.json",
        r#"{"n": 1, "c": 1, "numbers": [{"tuple": [2], "value": 2}]}"#,
    );
    let out = canonstrip(&["abelian", "--spec", &curve, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["residual"], serde_json::json!(["-1", "2"]));
    assert_eq!(v["residual_line"], "1/2");

    let bad = write_spec(
        dir.path(),
        "bad.json",
        include_str!("data/abelian_off_line.json"),
    );
    assert_eq!(
        canonstrip(&["abelian", "--spec", &bad]).status.code(),
        Some(1)
    );

    let negative = write_spec(
        dir.path(),
        "neg.json",
        r#"{"n": 1, "c": 1, "numbers": [{"tuple": [2], "value": -2}]}"#,
    );
    assert_eq!(
        canonstrip(&["abelian", "--spec", &negative]).status.code(),
        Some(2)
    );
    assert_eq!(
        canonstrip(&["abelian", "--spec", "/nonexistent/spec.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn input_errors_exit_two() {
    let out = canonstrip(&["gp", "--type", "E6", "--node", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("node out of range"));
    for args in [
        &["gp", "--type", "Q", "--rank", "3", "--node", "1"][..],
        &["gp", "--type", "A", "--node", "1"],
        &[
            "cover", "--type", "A", "--rank", "1", "--node", "1", "--degree", "3",
        ],
        &["sweep", "--max-rank", "11"],
        &["gp", "--bogus-flag"],
    ] {
        assert_eq!(canonstrip(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(canonstrip(&["--help"]).status.code(), Some(0));
}

#[test]
fn general_type_cover_makes_no_claim() {
    let out = canonstrip(&[
        "cover",
        "--type",
        "A",
        "--rank",
        "1",
        "--node",
        "1",
        "--degree",
        "3",
        "--allow-general-type",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["expected"], serde_json::Value::Null);
    assert_eq!(v["class"], "general_type");
}

#[test]
fn sweep_csv_is_identical_across_widths() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for jobs in ["1", "4", "8"] {
        let name = format!("sweep_{jobs}.csv");
        let out = Command::new(env!("CARGO_BIN_EXE_canonstrip"))
            .args([
                "sweep",
                "--max-rank",
                "3",
                "--format",
                "csv",
                "--jobs",
                jobs,
                "--out",
                &name,
            ])
            .env("CANONSTRIP_OUT_DIR", dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        files.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    let text = String::from_utf8(files[0].clone()).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "series,rank,node,degrees,dim,index,class,tcs,cl,boundary_contact,degree_L"
    );
}
