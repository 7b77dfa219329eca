use std::process::{Command, Output};

use serde_json::Value;

fn dcensus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcensus"))
        .args(args)
        .env_remove("DCENSUS_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> Value {
    let o = dcensus(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn census_trivial_case_is_cyclic() {
    let r = report(&["census", "--q", "3", "--n", "1", "--d", "1"]);
    assert_eq!(r["statistics"]["c"], "1/1");
    assert_eq!(r["statistics"]["c0"], "1/1");
    assert_eq!(r["schema_version"], 1);
}

#[test]
fn census_counts_isomorphism_classes() {
    let r = report(&["census", "--q", "3", "--n", "2", "--d", "1"]);
    assert_eq!(r["totals"]["iso_classes"], 24);
    assert_eq!(r["totals"]["supersingular_iso_classes"], 8);
    assert_eq!(r["totals"]["ordinary_iso_classes"], 16);
}

#[test]
fn even_q_skips_class_numbers() {
    let r = report(&["census", "--q", "4", "--n", "2", "--d", "1"]);
    assert_eq!(r["class_numbers"], "skipped (even q)");
    let claims = r["claims"].as_array().unwrap();
    let w = claims.iter().find(|c| c["id"] == "weight-equals-hurwitz").unwrap();
    assert_eq!(w["verdict"], "skipped");
    assert!(r["isogeny_classes"][0]["hurwitz"].is_null());
}

#[test]
fn p_and_s_select_the_same_field() {
    let a = dcensus(&["census", "--q", "9", "--n", "1", "--d", "1", "--format", "csv"]);
    let b = dcensus(&["census", "--p", "3", "--s", "2", "--n", "1", "--d", "1", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_has_summary_row() {
    let o = dcensus(&["census", "--q", "3", "--n", "2", "--d", "2", "--format", "csv"]);
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("summary,3,2,2,1,"), "{last}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = std::env::temp_dir().join(format!("dcensus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let paths = [dir.join("a.json"), dir.join("b.json")];
    for (path, jobs) in paths.iter().zip(["1", "4"]) {
        let o = dcensus(&["census", "--q", "5", "--n", "2", "--d", "2", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn invalid_configs_fail_with_messages() {
    for args in [
        &["census", "--q", "6", "--n", "1", "--d", "1"][..],
        &["census", "--q", "3", "--n", "2", "--d", "3"][..],
        &["census", "--q", "3", "--n", "9", "--d", "1"][..],
        &["census", "--q", "3", "--n", "1", "--d", "1", "--jobs", "0"][..],
    ] {
        let o = dcensus(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dcensus"))
        .args(["census", "--q", "3", "--n", "3", "--d", "1"])
        .env("DCENSUS_CAP", "10")
        .output()
        .unwrap();
    assert!(!o.status.success());
}

#[test]
fn hurwitz_breakdown() {
    let o = dcensus(&["hurwitz", "--q", "3", "--disc", "T^3-T"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("l = ")).count(), 1);
    assert!(text.contains("H = 4"));

    let o = dcensus(&["hurwitz", "--q", "3", "--disc", "T^3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("l = ")).count(), 2);
    assert!(text.contains("H = 4"));

    let o = dcensus(&["hurwitz", "--q", "3", "--disc", "T^2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("imaginary"));
}

#[test]
fn classno_prints_h() {
    let o = dcensus(&["classno", "--q", "3", "--disc", "T^3-T"]);
    assert_eq!(stdout(&o).trim(), "h = 4");
}

#[test]
fn verify_linear_cases_match_cyclicity_claim() {
    let o = dcensus(&[
        "verify", "--case", "3,1,1", "--case", "5,1,1", "--case", "7,1,1", "--format", "csv",
    ]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().filter(|l| l.contains(",cyclic-iff-trivial,")).map(String::from).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.contains(",match,")));
}

#[test]
fn verify_exits_zero_on_mismatches() {
    let o = dcensus(&["verify", "--case", "3,2,1", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().find(|l| l.contains(",isogeny-class-count,")).unwrap();
    assert!(row.starts_with("3,2,1,2,isogeny-class-count,6/1,10,mismatch"), "{row}");
}

#[test]
fn verify_empty_sweep_is_a_usage_error() {
    let o = dcensus(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trend_rows_are_sorted() {
    let o = dcensus(&["trend", "--d", "2", "--m", "1", "--q", "5,3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let qs: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(qs, ["3", "5"]);
}
