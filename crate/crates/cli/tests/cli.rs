mod common;

use common::{code, ordtope, schema, schema_errors, stdout};
use serde_json::Value;

#[test]
fn encode_and_decode_g() {
    let o = ordtope(&["encode", "--g", "--basis", "first:3", "1,2,3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "2250\n");
    let o = ordtope(&["decode", "--g", "--basis", "first:3", "2250"]);
    assert_eq!(stdout(&o), "1,2,3\n");
}

#[test]
fn decode_outside_domain_exits_3() {
    let o = ordtope(&["decode", "--g", "--basis", "first:3", "77"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not-in-factorial-domain"));
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        &["encode", "--g", "--basis", "first:2", "1,2,3"][..],
        &["encode", "--g", "1,x"],
        &["encode", "--g", "--basis", "nope", "1"],
        &["decode", "--g", "--basis", "first:3", "-4"],
        &["audit", "--claims", "nosuch"],
    ] {
        let o = ordtope(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn l_code_round_trip() {
    let o = ordtope(&["encode", "--l", "--basis", "first:3", "1,0,1"]);
    let value = stdout(&o);
    let o = ordtope(&["decode", "--l", "--basis", "first:3", value.trim()]);
    assert_eq!(stdout(&o), "1,0,1\n");
}

#[test]
fn order_curve_has_eight_rows() {
    let o = ordtope(&["order-curve", "--n", "3", "--basis", "first:3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    let preimages: Vec<&str> = rows.iter().map(|r| r.rsplit(',').next().unwrap()).collect();
    assert_eq!(
        preimages,
        ["0;0;0", "1;0;0", "0;1;0", "0;0;1", "1;1;0", "1;0;1", "0;1;1", "1;1;1"]
    );
}

#[test]
fn search_finds_random_subset() {
    let subset = "1,0,1,1,0,0,1,0,1,1,1,0,0,0,1,1";
    let t = stdout(&ordtope(&["encode", "--l", subset]));
    let o = ordtope(&["search", "--n", "16", "--target", t.trim()]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o);
    assert!(line.starts_with(&format!("preimage={subset} ")), "{line}");
    let comparisons: u64 = line.trim().rsplit('=').next().unwrap().parse().unwrap();
    assert!(comparisons <= 18);
}

#[test]
fn absent_target_exits_4() {
    assert_eq!(code(&ordtope(&["search", "--n", "3", "--target", "0.5"])), 4);
}

#[test]
fn budget_exits_5() {
    let o = ordtope(&["--budget", "4", "order-curve", "--n", "3"]);
    assert_eq!(code(&o), 5);
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_ordtope"))
        .args(["order-curve", "--n", "3"])
        .env("ORDTOPE_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn totient_audit() {
    let o = ordtope(&["audit", "--claims", "totient", "--n", "30", "--primes", "2,3,5"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(schema_errors(&schema(), &v).is_empty());
    assert_eq!(v[0]["computed_value"], 8);
    assert_eq!(v[0]["paper_value"], 8);
    assert_eq!(v[0]["verdict"], "verified");
}

#[test]
fn prop4_audit_records_both_values() {
    let o = ordtope(&["audit", "--claims", "eq.prop4", "--k", "1", "--m", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(schema_errors(&schema(), &v).is_empty());
    assert_eq!(v[0]["paper_value"], 9);
    assert!(v[0]["computed_value"].is_number());
}

#[test]
fn printed_schema_matches_bundled() {
    let o = ordtope(&["audit", "--schema"]);
    let printed: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let bundled: Value =
        serde_json::from_str(include_str!("../schema/audit-report.schema.json")).unwrap();
    assert_eq!(printed, bundled);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["audit", "--claims", "all"][..],
        &["bench", "--grid", "4,8", "--targets", "5"],
        &["sphere", "--n", "6", "--samples", "3"],
        &["jst", "--k", "2", "--m", "1", "--format", "csv"],
    ] {
        let a = ordtope(args);
        let b = ordtope(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_changes_sampling() {
    let a = ordtope(&["--seed", "1", "sphere", "--n", "4"]);
    let b = ordtope(&["--seed", "2", "sphere", "--n", "4"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn jst_audit_reports() {
    let o = ordtope(&["jst", "--k", "1", "--m", "1", "--audit"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(schema_errors(&schema(), &v).is_empty());
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(v[1]["claim"], "eq.prop2");
    assert_eq!(v[1]["verdict"], "verified");
}

#[test]
fn bench_csv_header() {
    let text = stdout(&ordtope(&["bench", "--grid", "4", "--targets", "2"]));
    assert_eq!(
        text.lines().next(),
        Some("n,size,method,targets,mean_comparisons,max_comparisons,all_found")
    );
    let timed = stdout(&ordtope(&["--timings", "bench", "--grid", "4", "--targets", "2"]));
    assert!(timed.lines().next().unwrap().ends_with(",wall_ms"));
}

#[test]
fn beadsort_and_sphere_stats() {
    assert_eq!(stdout(&ordtope(&["beadsort", "--width", "9", "5,1,9,0,3"])), "0,1,3,5,9\n");
    assert_eq!(code(&ordtope(&["beadsort", "--width", "4", "5"])), 2);
    let s: Value =
        serde_json::from_str(&stdout(&ordtope(&["sphere", "--n", "16", "--samples", "50", "--stats"])))
            .unwrap();
    assert_eq!(s["histogram"].as_array().unwrap().len(), 20);
}
