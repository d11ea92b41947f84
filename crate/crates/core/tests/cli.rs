use std::process::Command;

use wahl_core::cli::{render, Format, OutputRecord};

fn wahl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wahl")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

fn json(args: &[&str]) -> OutputRecord {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = wahl(&full);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).expect("valid record")
}

#[test]
fn enumerate_up_to_five() {
    let rec = json(&["markov", "enumerate", "--max", "5"]);
    assert_eq!(rec.kind, "markov.enumerate");
    let rows = rec.result.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2], serde_json::json!({"a": "1", "b": "2", "c": "5"}));
}

#[test]
fn phi_forward_of_112() {
    let rec = json(&["phi", "forward", "1", "1", "2"]);
    assert_eq!(rec.result["rank"], "2");
    assert_eq!(rec.result["degree"], "1");
    assert_eq!(rec.result["c2"], serde_json::json!({"num": "1", "den": "1"}));
}

#[test]
fn phi_forward_position_is_one_based() {
    let rec = json(&["phi", "forward", "5", "1", "2", "--pos", "1"]);
    assert_eq!(rec.result["rank"], "5");
    assert_eq!(rec.result["degree"], "2");
}

#[test]
fn wahl_resolve_5_2() {
    let rec = json(&["wahl", "resolve", "5", "2"]);
    assert_eq!(rec.result["presentation"], "1/25(1, 9)");
    assert_eq!(rec.result["chain"], serde_json::json!(["3", "5", "2"]));
    assert_eq!(rec.result["determinant"], "25");
}

#[test]
fn phi_round_trip_through_cli() {
    let rec = json(&["phi", "backward", "5", "2"]);
    assert_eq!(rec.result["triple"], serde_json::json!(["1", "2", "5"]));
}

#[test]
fn exit_codes() {
    let (code, _, err) = wahl(&["phi", "forward", "1", "1", "3"]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error:"));

    let (code, _, err) = wahl(&["wahl", "resolve", "6", "2"]);
    assert_eq!(code, 1, "{err}");

    let (code, _, err) = wahl(&["bundle", "mutate", "2", "1", "1", "2"]);
    assert_eq!(code, 1, "{err}");

    let (code, _, err) = wahl(&["markov", "mutate", "1", "1", "2", "--pos", "0"]);
    assert_eq!(code, 2);
    assert_eq!(err.lines().count(), 1, "{err}");

    assert_eq!(wahl(&["frobnicate"]).0, 2);
    assert_eq!(wahl(&["wahl", "resolve", "5"]).0, 2);
    assert_eq!(wahl(&["--format", "xml", "wahl", "resolve", "5", "2"]).0, 2);
    assert_eq!(wahl(&["--help"]).0, 0);
}

#[test]
fn negative_degrees_parse() {
    let rec = json(&["bundle", "c2", "5", "-1"]);
    assert_eq!(rec.result["c2"], serde_json::json!({"num": "14", "den": "5"}));
    assert_eq!(rec.result["integral"], false);
}

#[test]
fn rational_arguments() {
    let rec = json(&["bundle", "rr", "5", "1", "14/5"]);
    assert!(rec.result["chi"].is_object());
}

#[test]
fn output_is_byte_stable_and_round_trips() {
    let args = ["family", "mutation", "1", "2", "5", "--format", "json"];
    let (_, first, _) = wahl(&args);
    let (_, second, _) = wahl(&args);
    assert_eq!(first, second);
    let rec: OutputRecord = serde_json::from_str(&first).unwrap();
    assert_eq!(render(&rec, Format::Json), first);
}

#[test]
fn csv_and_table_render() {
    let (code, out, _) = wahl(&["markov", "enumerate", "--max", "13", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "a,b,c\n1,1,1\n1,1,2\n1,2,5\n1,5,13\n");

    let (code, out, _) = wahl(&["wahl", "resolve", "5", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("wahl.resolve\n"));
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["determinant", "25"]));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("wahl-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = wahl(&["toric", "wps", "1", "1", "1", "--format", "json", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let rec: OutputRecord = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rec.result["top_power"], serde_json::json!({"num": "1", "den": "1"}));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn verify_subset() {
    let (code, out, err) = wahl(&["verify", "--only", "6,10", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    let statuses: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(statuses, ["PASS", "PASS"]);
    assert_eq!(wahl(&["verify", "--only", "99"]).0, 1);
}

#[test]
fn families_report() {
    let rec = json(&["family", "descent", "5", "2"]);
    assert_eq!(rec.result["equation_text"], "XY - tZ^5 - T^2 = 0");
    let rec = json(&["family", "smoothings", "1", "2", "5"]);
    assert_eq!(rec.result.as_array().unwrap().len(), 4);
}
