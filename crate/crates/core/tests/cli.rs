use std::process::{Command, Output};

use serde_json::Value;

fn kummer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kummer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn results_of_kind<'a>(v: &'a Value, kind: &str) -> Vec<&'a Value> {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["kind"] == kind)
        .collect()
}

#[test]
fn verify_kummer_at_one() {
    let out = kummer(&["verify", "--identity", "kummer2", "--a", "1", "--z", "1", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["version"], "1");
    assert_eq!(v["command"], "verify");
    let p = results_of_kind(&v, "point")[0];
    assert!(p["rel_residual"].as_f64().unwrap() <= 1e-10);
    assert!((p["lhs"].as_f64().unwrap() - 1f64.sinh()).abs() < 1e-14);
}

#[test]
fn certify_plus_regular_family() {
    let out = kummer(&["certify", "--family", "P1-λ0", "--a", "1/3", "--N", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let c = results_of_kind(&v, "certification")[0];
    assert_eq!(c["certified"], true);
    assert_eq!(c["mismatches"], 0);
    assert_eq!(c["first_mismatch"], Value::Null);
    assert_eq!(c["family"], "P1-λ0");
}

#[test]
fn certify_all_skips_excluded_pairs() {
    let out = kummer(&["certify", "--family", "all", "--a", "1/2,1/3", "--N", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let skipped = results_of_kind(&v, "skipped");
    // a = 1/2: K2-odd-exponent, P1-λ−2a and M1-λ0 are excluded
    assert_eq!(skipped.len(), 3);
    assert_eq!(results_of_kind(&v, "certification").len(), 9);
}

#[test]
fn frobenius_exact_coefficients() {
    let out = kummer(&["frobenius", "--offset", "+1", "--a", "1", "--lambda", "0", "--N", "3", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let coeffs: Vec<&str> = results_of_kind(&v, "coefficient")
        .iter()
        .map(|c| c["coefficient"].as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["1", "-1/3", "1/6", "-1/30"]);
    let ind = results_of_kind(&v, "indicial")[0];
    assert_eq!(ind["root_other"], "-2");
    assert_eq!(ind["integer_gap"], 2);
}

#[test]
fn frobenius_both_roots_flags_log_case() {
    let out = kummer(&["frobenius", "--offset", "+1", "--a", "1", "--N", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sols = results_of_kind(&v, "solution");
    assert_eq!(sols.len(), 2);
    assert_eq!(sols[0]["lambda"], "0");
    assert_eq!(sols[0]["log_case"], false);
    assert_eq!(sols[1]["lambda"], "-2");
    assert_eq!(sols[1]["log_case"], true);
}

#[test]
fn eval_in_both_modes() {
    let out = kummer(&["eval", "--function", "0f1", "--b", "3/2", "--x", "1/4", "--tol", "1e-13"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert!((r["value"].as_f64().unwrap() - 1.1752011936438014).abs() < 1e-13);
    assert_eq!(r["mode"], "float64");

    let out = kummer(&["eval", "--function", "1f1", "--a", "1", "--b", "2", "--x", "2", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert!((r["value"].as_f64().unwrap() - 3.194528049465325).abs() < 1e-9);
    assert!(r["exact_value"].as_str().unwrap().contains('/'));
}

#[test]
fn usage_errors_exit_2() {
    let out = kummer(&["verify", "--identity", "contig-plus", "--a", "-1/2", "--z", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--a") && err.contains("excluded"), "{err}");

    assert_eq!(kummer(&["verify", "--identity", "contig-minus", "--a", "1/2", "--z", "1"]).status.code(), Some(2));
    assert_eq!(kummer(&["verify", "--identity", "nope", "--a", "1", "--z", "1"]).status.code(), Some(2));
    assert_eq!(kummer(&["eval", "--function", "0f1", "--b", "1", "--x", "1", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(kummer(&["frobenius", "--offset", "2", "--a", "1"]).status.code(), Some(2));
    assert_eq!(kummer(&["frobenius", "--offset", "0", "--a", "1", "--N", "1"]).status.code(), Some(2));
    assert_eq!(kummer(&["bogus"]).status.code(), Some(2));
}

#[test]
fn unattainable_tolerance_is_a_verification_failure() {
    let out = kummer(&["verify", "--identity", "contig-plus", "--a", "0.25", "--z", "-5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--identity", "contig-minus", "--a", "0.75,2.5", "--random-z", "6", "--seed", "42"];
    let first = kummer(&args);
    let second = kummer(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let mut other_seed = args.to_vec();
    other_seed[8] = "43";
    assert_ne!(first.stdout, kummer(&other_seed).stdout);
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    let base = ["verify", "--identity", "contig-plus", "--a", "0.25,7", "--z", "-5,-0.1,0.1,5"];
    let j = kummer(&[&base[..], &["--format", "json"]].concat());
    let c = kummer(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(j.status.code(), Some(0));
    assert_eq!(c.status.code(), Some(0));
    let v = json(&j);
    let mut rdr = csv::Reader::from_reader(&c.stdout[..]);
    let header = rdr.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let points = results_of_kind(&v, "point");
    assert_eq!(rows.len(), points.len());
    for (row, p) in rows.iter().zip(points) {
        for field in ["a", "z", "lhs", "rhs", "abs_residual", "rel_residual"] {
            let idx = header.iter().position(|h| h == field).unwrap();
            let csv_text = &row[idx];
            assert_eq!(csv_text, p[field].to_string(), "{field}");
            assert_eq!(csv_text.parse::<f64>().unwrap(), p[field].as_f64().unwrap());
        }
    }
}

#[test]
fn exact_verify_reports_connection_constants() {
    let out = kummer(&["verify", "--identity", "contig-plus", "--a", "1/4,1", "--z", "0.5", "--mode", "exact", "--N", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let conn = results_of_kind(&v, "connection");
    assert_eq!(conn[0]["A"], "1");
    assert_eq!(conn[0]["B"], "0");
    assert_eq!(conn[0]["status"], "matched");
    assert_eq!(conn[1]["status"], "deferred-log-case");
}

#[test]
fn out_flag_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = kummer(&[
        "verify", "--identity", "kummer2", "--a", "1", "--z", "0", "--format", "text", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("verdict: pass"), "{text}");
    assert!(text.contains("kind=point"));
}
