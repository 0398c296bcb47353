use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Map<String, serde_json::Value>> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap().as_object().unwrap().clone())
        .collect()
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    for args in [
        vec!["odd-zeta", "--m", "2"],
        vec!["series", "--k", "2", "--s", "3+1i", "--alpha", "0.5"],
        vec!["identities", "--id", "II", "--s", "2"],
    ] {
        let text = run(&args);
        assert!(text.status.success(), "{args:?}");
        let mut json_args = vec!["--format", "json"];
        json_args.extend(&args);
        let json = run(&json_args);
        let text = stdout(&text);
        for (key, value) in &json_lines(&json)[0] {
            let v = value.as_str().unwrap();
            if !v.is_empty() {
                assert!(text.contains(v), "{key}={v} missing from text output of {args:?}");
            }
        }
    }
}

#[test]
fn error_bound_meets_requested_tolerance() {
    for tol in ["1e-20", "1e-45"] {
        let o = run(&["--tol", tol, "--format", "json", "odd-zeta", "--m", "3"]);
        assert!(o.status.success());
        let bound: f64 = json_lines(&o)[0]["error_bound"].as_str().unwrap().parse().unwrap();
        assert!(bound <= tol.parse::<f64>().unwrap());
    }
    // too few terms for the tolerance
    let o = run(&["--max-terms", "8", "series", "--k", "1", "--s", "2", "--alpha", "0.9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PRECISION_EXHAUSTED"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["odd-zeta", "--m", "0"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let pole = run(&["zeta", "--s", "1"]);
    assert_eq!(pole.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&pole.stderr).starts_with("error: POLE_AT_ONE"));
    let outside = run(&["series", "--k", "1", "--s", "2", "--alpha", "1.5"]);
    assert_eq!(outside.status.code(), Some(1));
}

#[test]
fn empty_sweep_prints_header_only() {
    let o = run(&["--format", "csv", "table", "--kind", "odd-zeta", "--from", "3", "--to", "2", "--step", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "# zetaforge-csv v1");
    assert!(lines[1].starts_with("point,"));
}

#[test]
fn sweep_rows_are_ordered() {
    let o = run(&["--format", "json", "table", "--kind", "odd-zeta", "--from", "1", "--to", "4", "--step", "1"]);
    assert!(o.status.success());
    let points: Vec<String> = json_lines(&o)
        .iter()
        .map(|r| r["point"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(points, ["1", "2", "3", "4"]);
}

#[test]
fn characters_mod_four() {
    let o = run(&["--format", "csv", "characters", "--q", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2 + 2);
}

#[test]
fn catalan_from_lfunction() {
    let o = run(&["--format", "json", "lfunction", "--q", "4", "--index", "1", "--m", "1"]);
    assert!(o.status.success());
    let v = json_lines(&o)[0]["value"].as_str().unwrap().to_string();
    let x: f64 = v.parse().unwrap();
    assert!((x - 0.915_965_594_177_219).abs() < 1e-15, "{v}");
}

#[test]
fn validate_writes_ledger_and_gates_printed_mode() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("ledger.jsonl");
    let ledger = ledger.to_str().unwrap();
    let printed = run(&["--ledger", ledger, "odd-zeta", "--m", "1", "--mode", "as-printed"]);
    assert!(printed.status.success());
    let v = run(&["--ledger", ledger, "--format", "json", "validate", "--formula", "odd_zeta_rapid", "--m", "1"]);
    assert!(v.status.success());
    assert_eq!(json_lines(&v)[0]["verdict"], "REFUTED");
    let text = std::fs::read_to_string(ledger).unwrap();
    assert_eq!(text.lines().count(), 1);
    let gated = run(&["--ledger", ledger, "odd-zeta", "--m", "1", "--mode", "as-printed"]);
    assert_eq!(gated.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&gated.stderr).contains("FORMULA_REFUTED"));
    // validated mode is unaffected
    assert!(run(&["--ledger", ledger, "odd-zeta", "--m", "1"]).status.success());
}
