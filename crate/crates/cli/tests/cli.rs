use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn lnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn unknown_scheme_is_a_config_error() {
    let out = lnc(&["gain", "--scheme", "no-such-scheme"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lnc(&["simulate", "--scenario", "1", "--scheme", "no-such-scheme", "--snr-db", "0:1:1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lnc(&["simulate", "--scenario", "7", "--scheme", "conv-nu1", "--snr-db", "0:1:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gain_report() {
    let v = json(&lnc(&["gain", "--scheme", "hamming-ext-32"]));
    assert_eq!(v["name"], "hamming-ext-32");
    assert!((v["gamma_c"].as_f64().unwrap() - 3.08).abs() < 0.005);
    let v = json(&lnc(&["gain", "--scheme", "baseline-pi3"]));
    assert!((v["gamma_c"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn gain_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    fs::write(&path, r#"{"name":"rep","construction":"a","p":3,"code":{"n":2,"rows":[[1,1]]}}"#).unwrap();
    let v = json(&lnc(&["gain", "--scheme", path.to_str().unwrap()]));
    assert_eq!(v["name"], "rep");
    assert!((v["gamma_c"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn snf_of_integer_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, r#"{"ring":"Z","rows":3,"cols":3,"entries":[2,4,4,-6,6,12,10,4,16]}"#).unwrap();
    let v = json(&lnc(&["snf", "--input", path.to_str().unwrap()]));
    assert_eq!(v["ring"], "Z");
    assert_eq!(v["d"], serde_json::json!([2, 2, 156]));
    assert_eq!(v["p"].as_array().unwrap().len(), 3);

    fs::write(&path, r#"{"ring":"Z","rows":2,"cols":2,"entries":[1]}"#).unwrap();
    assert_eq!(lnc(&["snf", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lnc(&["snf", "--input", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn rate_single_user() {
    let v = json(&lnc(&["rate", "--h", "[1]", "--a", "[1]", "--snr-db", "10"]));
    assert!((v["rate"].as_f64().unwrap() - 11f64.log2()).abs() < 1e-9);
}

#[test]
fn select_coefficients() {
    let v = json(&lnc(&["select-coeffs", "--h", "[[1,0],[0,1]]", "--snr-db", "20", "--m", "2"]));
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    assert!(list[0]["norm_sq"].as_f64().unwrap() <= list[1]["norm_sq"].as_f64().unwrap());
    let out = lnc(&["select-coeffs", "--h", "[1,1]", "--snr-db", "20", "--pi", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn recover_header_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.json");
    // a, b, c, d = 1, 0, 1, 1
    fs::write(
        &path,
        r#"[{"moduli":[12,6,2,2],"header_len":2,"components":[2,3,1,1]},
            {"moduli":[12,6,2,2],"header_len":2,"components":[3,2,1,0]}]"#,
    )
    .unwrap();
    let v = json(&lnc(&["recover", "--packets", path.to_str().unwrap()]));
    assert_eq!(v["status"], "recovered");
    let payloads = v["payloads"].as_array().unwrap();
    let expect = [[1, 0], [1, 1]];
    for (p, e) in payloads.iter().zip(expect) {
        for (x, want) in p.as_array().unwrap().iter().zip(e) {
            let re = x["value"][0].as_i64().unwrap();
            let im = x["value"][1].as_i64().unwrap();
            assert_eq!(((re - want).rem_euclid(2), im.rem_euclid(2)), (0, 0), "{x}");
        }
    }
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let p = path.to_str().unwrap();
    let args = ["simulate", "--scenario", "1", "--scheme", "baseline-pi3", "--snr-db", "0:5:10", "--frames", "20"];
    let out = lnc(&[&args[..], &["--out", p]].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scheme,scenario,combination_index,snr_db,frames,frame_errors,fer,ube,seed"));
    assert_eq!(lines.count(), 3);
    let again = lnc(&args);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn simulate_negative_grid() {
    let out = lnc(&["simulate", "--scenario", "1", "--scheme", "ng-outage", "--snr-db", "-4:1:-2", "--frames", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}
