use std::process::Command;

use serde_json::Value;

fn operlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_operlab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = operlab(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn curve_hasse_reports_three_oracles() {
    let v = json(&["curve", "hasse", "--curve", "p=5 A=1 B=0"]);
    assert_eq!(v["results"]["H"], "2");
    assert_eq!(v["results"]["agreement"], "3/3");
    assert_eq!(v["passed"], true);
}

#[test]
fn census_csv() {
    let (code, out, _) = operlab(&["census", "--type", "A", "--n", "2", "--p", "5..13", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "p,count\n5,2\n7,3\n11,5\n13,6\n");
}

#[test]
fn witt_classify_ten_classes() {
    let v = json(&["witt", "classify", "--n", "2", "--p", "5", "--N", "2", "--miura"]);
    let classes = v["results"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 10);
    assert!(classes.iter().all(|c| c["flag_det_unit"] == true && c["reduction_check"] == "pass"));
    assert_eq!(v["results"]["miura"]["tuple_count"], 20);
}

#[test]
fn oper_classify_certificate_shape() {
    let v = json(&["oper", "classify", "--n", "2", "--curve", "p=5 A=1 B=0"]);
    let r = &v["results"];
    assert_eq!(r["normalized"], true);
    assert_eq!(r["classes"].as_array().unwrap().len(), 2);
    for c in r["classes"].as_array().unwrap() {
        assert_eq!(c["dormant"], true);
        assert_eq!(c["miura_lifts"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn reduce_and_lift() {
    let v = json(&["witt", "reduce", "--class", "0,1", "--p", "5", "--N", "2"]);
    assert_eq!(v["results"]["reduced"]["side"], "(1,N)");
    let v = json(&["witt", "lift", "--class", "0,1", "--p", "5", "--N", "2"]);
    assert_eq!(v["checks"]["lift_reduces_back"], true);
}

#[test]
fn dop_verify_with_table() {
    let v = json(&["dop", "verify429", "--a", "7", "--p", "5", "--N", "2", "--window", "60", "--table"]);
    assert_eq!(v["results"]["result"], "pass");
    assert_eq!(v["table"]["rows"].as_array().unwrap().len(), 121 * 2);
}

#[test]
fn exit_codes() {
    assert_eq!(operlab(&["oper", "classify", "--n", "3", "--curve", "p=5 A=1 B=0"]).0, 1);
    assert_eq!(operlab(&["witt", "classify", "--n", "2", "--p", "9", "--N", "1"]).0, 1);
    assert_eq!(operlab(&["witt", "decompose", "--matrix", "1,1;0,1", "--p", "5", "--N", "2"]).0, 2);
    assert_eq!(operlab(&["bogus"]).0, 1);
    assert_eq!(operlab(&["--help"]).0, 0);
    let (code, _, err) = operlab(&["witt", "reduce", "--class", "0,5", "--p", "5", "--N", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("`class`"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let (code, out, _) = operlab(&["curve", "hasse", "--curve", "node p=7", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["results"]["H"], "1");
}
