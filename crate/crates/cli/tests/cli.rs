use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn gainprophet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gainprophet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = gainprophet(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn support_golden() {
    let v = json(&["support", "--table", &fixture("table1.csv")]);
    assert_eq!(v["support"]["MH"]["fraction"], "3/4");
    assert_eq!(v["support"]["ML"]["fraction"], "1/4");
    assert_eq!(v["support"]["CL"]["decimal"], 0.25);
    assert_eq!(
        v["optimum"]["condition"],
        serde_json::json!(["PH", "QB", "MH", "RL", "CL"])
    );
    assert!(stdout(&gainprophet(&[
        "support",
        "--table",
        &fixture("table1.csv")
    ]))
    .contains("\"MH\": {\n      \"fraction\": \"3/4\""));
}

#[test]
fn fuzzy_opt_golden() {
    let v = json(&[
        "fuzzy-opt",
        "--sets",
        &fixture("table4.csv"),
        "--years",
        &fixture("years.csv"),
    ]);
    let mu = &v["memberships"]["memberships"];
    assert_eq!(mu["x3"], 0.9);
    assert_eq!(mu["x4"], 0.2);
    assert_eq!(mu["x5"], 0.2);
    let years: Vec<&str> = v["realization"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["year"].as_str().unwrap())
        .collect();
    assert_eq!(years, ["y3", "y3", "y1", "y1", "y2"]);
}

#[test]
fn states_prints_one_line_per_state() {
    let out = gainprophet(&["states"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 32);
    assert_eq!(
        text.lines().nth(13).unwrap(),
        r#"{"code":13,"bits":[0,1,1,0,1],"levels":"PL QB MH RL CH"}"#
    );
    let table = stdout(&gainprophet(&["--output", "table", "states"]));
    assert_eq!(table.lines().last().unwrap(), "11111\tPH QB MH RH CH");
}

#[test]
fn sequence_reports_ties() {
    let v = json(&["sequence", "--table", &fixture("table1.csv")]);
    assert_eq!(v["matrix"][0]["bits"], serde_json::json!([0, 1, 1, 0, 1]));
    assert_eq!(
        v["pattern"]["recommendation"],
        "dominant: MH CH; tie: P Q R"
    );
}

#[test]
fn predict_renders_trimmed_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    std::fs::write(&path, "year,gain\ny1,10\ny2,12\ny3,9\n").unwrap();
    let v = json(&["predict", "--series", path.to_str().unwrap()]);
    assert_eq!(v["predicted_gain"], 6.5);
    assert_eq!(v["normalization_factor"], -5.5);
    assert_eq!(v["optimum_gain"].to_string(), "12");
    let trend = json(&[
        "predict",
        "--series",
        path.to_str().unwrap(),
        "--policy",
        "trend",
    ]);
    assert_eq!(trend["predicted_gain"], 6.5);
}

#[test]
fn mle_normal_is_mean() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    std::fs::write(&path, "year,gain\na,2\nb,4\nc,9\n").unwrap();
    let v = json(&["mle", "--series", path.to_str().unwrap()]);
    assert_eq!(v["expected_gain"], 5);
    let no_root = gainprophet(&[
        "mle",
        "--series",
        path.to_str().unwrap(),
        "--lo",
        "10",
        "--hi",
        "20",
    ]);
    assert_eq!(no_root.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_two_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "year,gain\ny1,abc\n").unwrap();
    let out = gainprophet(&["predict", "--series", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("line 2"), "{err}");

    let dup = dir.path().join("dup.csv");
    std::fs::write(&dup, "year,gain\ny1,1\ny1,2\n").unwrap();
    let out = gainprophet(&["predict", "--series", dup.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_names_path() {
    let out = gainprophet(&["hm", "--values", "/no/such/values.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/values.csv"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = gainprophet(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert!(gainprophet(&["--help"]).status.success());
}

#[test]
fn bad_partition_is_rejected() {
    let out = gainprophet(&[
        "fuzzy-opt",
        "--sets",
        &fixture("table4.csv"),
        "--years",
        &fixture("years.csv"),
        "--union",
        "x1,x2",
        "--intersection",
        "x4,x5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x3"));
}

#[test]
fn ar_and_ma_from_fixtures() {
    let v = json(&[
        "ar",
        "--series",
        &fixture("series.csv"),
        "--intercept",
        "1",
        "--coefficients",
        "0.5,0.25",
    ]);
    // 1 + 0.5*30 + 0.25*14
    assert_eq!(v["forecast"], 19.5);
    let v = json(&[
        "ma",
        "--shocks",
        &fixture("shocks.csv"),
        "--coefficients",
        "0.5,-0.25",
        "--next-shock",
        "1",
    ]);
    assert_eq!(v["forecast"], 2.5);
}

#[test]
fn statistics_commands() {
    assert_eq!(
        json(&["expect", "--dist", &fixture("dist.csv")])["expectation"],
        2.3
    );
    let j = json(&["joint", "--joint", &fixture("joint.csv")]);
    assert_eq!(j["e_sum"], 17.7);
    assert_eq!(j["e_g"], 1.7);
    let g = json(&["gm-check", "--m", "2", "--n", "3", "--a1", "0", "--a2", "2"]);
    assert_eq!(g["holds"], true);
    assert_eq!(g["lhs"], 6);
    let md = json(&["md", "--values", &fixture("values.csv")]);
    assert_eq!(md["mean_deviation"], 2.66666666667);
    let hm = json(&["hm", "--values", &fixture("values.csv")]);
    assert_eq!(hm["harmonic_mean"], 3.48387096774);
}
