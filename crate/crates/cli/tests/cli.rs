use std::io::Write;
use std::process::{Command, Stdio};

use abelmod::io::{hilb_from_json, hilb_to_json, ideal_from_json, ideal_to_json, with_schema};
use abelmod::linalg::{GaussRat, ToleranceFrame};
use serde_json::{json, Value};

fn run(args: &[&str], input: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_abelmod"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str], input: &Value) -> (i32, Value) {
    let (code, out) = run(args, &input.to_string());
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}")))
}

fn q(re: i64, im: i64) -> Value {
    json!({"re": re.to_string(), "im": im.to_string()})
}

fn diag12(v: [i64; 2]) -> Value {
    json!({"n": 2, "B": [[[q(1, 0), q(0, 0)], [q(0, 0), q(2, 0)]]], "v": [q(v[0], 0), q(v[1], 0)]})
}

/// `B = (J_2, 2 I)` with `v = e_2`: cyclic, unipotent times 2, one point.
fn jordan_betti() -> Value {
    json!({
        "n": 2,
        "B": [[[q(1, 0), q(1, 0)], [q(0, 0), q(1, 0)]], [[q(2, 0), q(0, 0)], [q(0, 0), q(2, 0)]]],
        "v": [q(0, 0), q(1, 0)],
    })
}

#[test]
fn diagonal_pair_marked_by_an_eigenvector_is_unstable() {
    let (code, out) = run_json(&["stability"], &diag12([1, 0]));
    assert_eq!(code, 0);
    assert_eq!(out["schema"], "abelmod/1");
    assert_eq!(out["stable"], false);
    // span(e_1) is B-invariant and contains v; it is the Krylov space of v.
    assert_eq!(out["witness_subspace"], json!([[q(1, 0)], [q(0, 0)]]));

    let (code, out) = run_json(&["stability"], &diag12([1, 1]));
    assert_eq!(code, 0);
    assert_eq!(out["stable"], true);
    assert_eq!(out["witness_subspace"], Value::Null);
}

#[test]
fn identity_anchor_is_de_rham_and_dualizes_to_the_symmetric_side() {
    let one_by_one = |x: i64| json!([[q(x, 0)]]);
    let triple = json!({"d": 1, "v": 1, "alpha": one_by_one(1), "beta": one_by_one(0), "gamma": one_by_one(0)});
    let (code, out) = run_json(&["classify-dalgebra"], &triple);
    assert_eq!(code, 0);
    assert_eq!(out["label"]["kind"], "DeRham");
    let dual = &out["fm_dual"];
    assert_eq!((dual["alpha"].clone(), dual["beta"].clone()), (one_by_one(0), one_by_one(1)));
}

#[test]
fn hilbert_chow_of_a_punctual_point_has_one_support_point() {
    let (code, dr) = run_json(&["rh-transform", "--to", "derham"], &jordan_betti());
    assert_eq!(code, 0);
    let (code, sym) = run_json(&["hilbert-chow"], &dr);
    assert_eq!(code, 0);
    let support = sym["support"].as_array().unwrap();
    assert_eq!(support.len(), 1);
    assert_eq!(support[0]["multiplicity"], 2);
}

#[test]
fn riemann_hilbert_and_hodge_round_trips_are_byte_identical() {
    let (_, betti) = run_json(&["rh-transform", "--to", "derham"], &jordan_betti());
    let (code, back) = run_json(&["rh-transform", "--from", "derham", "--to", "betti"], &betti);
    assert_eq!(code, 0);
    let (_, direct) = run_json(&["rh-transform", "--to", "betti"], &betti);
    assert_eq!(back, direct);
    assert_eq!(back["space"]["kind"], "betti");

    for tau in ["2", "1/2", "0,1"] {
        let (code, hod) = run_json(&["hodge-deform", "--tau", tau], &betti);
        assert_eq!(code, 0, "tau {tau}");
        let (code, undone) = run_json(&["hodge-deform", "--inverse"], &hod);
        assert_eq!(code, 0);
        assert_eq!(undone, betti, "tau {tau}");
    }
    let (code, out) = run_json(&["hodge-deform", "--tau", "0"], &betti);
    assert_eq!((code, out["error"].as_str()), (2, Some("TauZero")));
}

#[test]
fn wrong_source_side_is_a_domain_error() {
    let (code, out) = run_json(&["rh-transform", "--from", "derham", "--to", "betti"], &jordan_betti());
    assert_eq!(code, 2);
    assert_eq!(out["error"], "SpaceMismatch");
}

#[test]
fn emitted_documents_parse_back_to_equal_values() {
    let tol = ToleranceFrame::default();
    let (_, inf) = run_json(&["canonicalize"], &diag12([1, 1]));
    let parsed = ideal_from_json::<GaussRat>(&inf).unwrap();
    assert_eq!(with_schema(ideal_to_json(&parsed)), inf);

    let (_, dr) = run_json(&["rh-transform", "--to", "derham"], &jordan_betti());
    let parsed = hilb_from_json::<GaussRat>(&dr, &tol).unwrap();
    assert_eq!(with_schema(hilb_to_json(&parsed)), dr);
}

#[test]
fn exact_output_is_byte_identical_across_runs() {
    for args in [&["canonicalize"][..], &["spectrum"], &["rees", "--t", "1/3"]] {
        let input = diag12([1, 1]).to_string();
        let first = run(args, &input);
        assert_eq!(first.0, 0);
        assert_eq!(first, run(args, &input));
    }
}

#[test]
fn exit_statuses_separate_malformed_input_from_domain_errors() {
    assert_eq!(run(&["stability"], "{not json").0, 1);
    assert_eq!(run(&["stability"], r#"{"n": 2}"#).0, 1);
    assert_eq!(run(&["stability", "--no-such-flag"], "{}").0, 1);
    assert_eq!(run(&["stability", "--mode", "float"], &json!({"n": 1, "B": [[[q(1, 0)]]], "mode": "exact"}).to_string()).0, 1);

    let (code, out) = run_json(&["canonicalize"], &diag12([1, 0]));
    assert_eq!(code, 2);
    assert_eq!(out["error"], "NotStable");
    assert!(out["detail"].is_string());

    let noncommuting = json!({"n": 2, "B": [[[q(0, 0), q(1, 0)], [q(0, 0), q(0, 0)]], [[q(0, 0), q(0, 0)], [q(1, 0), q(0, 0)]]]});
    let (code, out) = run_json(&["spectrum"], &noncommuting);
    assert_eq!((code, out["error"].as_str()), (2, Some("NotCommuting")));
}

#[test]
fn batches_keep_input_order_and_report_the_worst_status() {
    let batch = json!([diag12([1, 1]), diag12([1, 0]), diag12([2, 1])]);
    let (code, out) = run_json(&["canonicalize"], &batch);
    assert_eq!(code, 2);
    let results = out["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert!(results[0]["staircase"].is_array());
    assert_eq!(results[1]["error"], "NotStable");
    assert!(results[2]["staircase"].is_array());

    let (code, out) = run_json(&["stability"], &json!([diag12([1, 1]), {"n": 2}]));
    assert_eq!(code, 1);
    assert_eq!(out["results"][1]["error"], "MalformedInput");
}

#[test]
fn float_mode_agrees_with_exact_on_the_spectrum() {
    let float_doc = json!({"n": 2, "B": [[[{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}], [{"re": 0.0, "im": 0.0}, {"re": 2.0, "im": 0.0}]]]});
    let (code, out) = run_json(&["spectrum", "--mode", "float"], &float_doc);
    assert_eq!(code, 0);
    let points: Vec<f64> = out["spectrum"].as_array().unwrap().iter().map(|p| p[0]["re"].as_f64().unwrap()).collect();
    assert!((points[0] - 1.0).abs() < 1e-12 && (points[1] - 2.0).abs() < 1e-12, "{points:?}");
}

#[test]
fn files_and_table_output() {
    let dir = std::env::temp_dir().join(format!("abelmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (input, output) = (dir.join("in.json"), dir.join("out.json"));
    std::fs::write(&input, diag12([1, 1]).to_string()).unwrap();
    let (code, stdout) = run(
        &["spectrum", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()],
        "",
    );
    assert_eq!((code, stdout.as_str()), (0, ""));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(written["support"].as_array().unwrap().len(), 2);

    let (code, table) = run(&["spectrum", "--format", "table"], &diag12([1, 1]).to_string());
    assert_eq!(code, 0);
    assert!(table.lines().any(|l| l.starts_with("support ")), "{table}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_runs_a_small_suite() {
    let (code, out) = run(&["check", "--samples", "0.01", "--n-max", "3", "--d-max", "1", "--seed", "7"], "");
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(code, 0, "{out}");
    assert_eq!(report["schema"], "abelmod/1");
    assert_eq!(report["passed"], true);
    assert_eq!(report["criteria"].as_array().unwrap().len(), 8);
    assert_eq!(run(&["check", "--samples", "0.01", "--n-max", "3", "--d-max", "1", "--seed", "7"], "").1, out);
}
