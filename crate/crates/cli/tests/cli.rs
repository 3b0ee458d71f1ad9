use std::process::{Command, Output};

use serde_json::Value;

fn ivpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivpoly")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = ivpoly(&all);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

fn comparable(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("duration");
    v
}

#[test]
fn member_exit_codes() {
    let (code, v) = json(&["member", "C(X,2)", "int"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["member"], true);
    let (code, v) = json(&["member", "C(X,2)", "int-mod:2"]);
    assert_eq!(code, 1);
    assert_eq!(v["witnesses"][0]["kind"], "congruence");
    let (code, v) = json(&["member", "X + (C(X,2))*rho1", "ext:[2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["member"], true);
    let (code, _) = json(&["member", "C(X,2)", "ext:[2]"]);
    assert_eq!(code, 1);
}

#[test]
fn member_from_flags() {
    assert_eq!(json(&["member", "X^2", "--modulus", "3"]).0, 0);
    assert_eq!(json(&["member", "C(X,2)", "--k", "1"]).0, 1);
    assert_eq!(json(&["member", "X^3", "--multiset", "[2,2]"]).0, 0);
    assert_eq!(json(&["member", "(2*C(X,2) ; C(X,3))", "--module", "Z(+)Z"]).0, 0);
    assert_eq!(json(&["member", "(C(X,2) ; 0)", "idealization:Z(+)Z/3,1"]).0, 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["member", "C(X,2)", "bogus"][..],
        &["member", "C(X,2", "int"],
        &["member", "X", "int-mod:0"],
        &["basis", "mod:2", "-D", "65"],
        &["basis", "lcm:2"],
        &["verify", "section9"],
        &["vanish", "Q"],
        &["frobnicate"],
    ] {
        assert_eq!(ivpoly(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn basis_reports() {
    let (code, v) = json(&["basis", "mod:3", "-D", "6"]);
    assert_eq!(code, 0);
    let pivots: Vec<&str> = v["result"]["pivots"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(pivots, ["1", "1", "1", "3", "3", "3", "3"]);
    let (_, v) = json(&["basis", "mod:1", "-D", "4"]);
    assert_eq!(v["result"]["pivots"], serde_json::json!(["1", "1", "1", "1", "1"]));
    let (code, v) = json(&["basis", "mod:4", "-D", "12", "--conjecture"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "EQUAL");
}

#[test]
fn reports_are_deterministic() {
    let args = ["member", "C(X,3) + X/2", "int-multiset:[2,3]"];
    assert_eq!(comparable(json(&args).1), comparable(json(&args).1));
    let text_a = ivpoly(&["vanish", "Z/6"]).stdout;
    let text_b = ivpoly(&["vanish", "Z/6"]).stdout;
    let strip = |b: Vec<u8>| String::from_utf8(b).unwrap().lines().filter(|l| !l.starts_with("duration")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(text_a), strip(text_b));
}

#[test]
fn verify_suites() {
    let (code, v) = json(&["verify", "section5"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["summary"], "1/1 criteria pass");
    let single = Command::new(env!("CARGO_BIN_EXE_ivpoly"))
        .args(["--format", "json", "verify", "section5"])
        .env("IVPOLY_THREADS", "1")
        .output()
        .unwrap();
    let v1: Value = serde_json::from_slice(&single.stdout).unwrap();
    assert_eq!(comparable(v1), comparable(v));
}

#[test]
fn eval_and_decompose() {
    let (code, v) = json(&["eval", "(X^2 ; X)", "(3 ; 2)", "--module", "Z(+)Z/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["value"], "(9, [3])");
    let (_, v) = json(&["eval", "X^2", "3 + 5*eps1", "--relations", "[0]"]);
    assert_eq!(v["result"]["closed_form_terms"], 2);
    let (_, v) = json(&["decompose", "X + (C(X,2))*rho1", "--relations", "[2]"]);
    assert_eq!(v["result"]["pullback"]["second"], "X^2");
    let (_, v) = json(&["decompose", "X^3/6 - X/6"]);
    assert_eq!(v["result"]["binomial"], "C(X,2) + C(X,3)");
}

#[test]
fn vanish_reports() {
    let (code, v) = json(&["vanish", "Z/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["generators"], serde_json::json!(["X^2 + X"]));
    assert_eq!(v["result"]["principality"]["principal"], true);
    let (_, v) = json(&["vanish", "Z/4"]);
    assert_eq!(v["result"]["principality"]["principal"], false);
    assert_eq!(v["result"]["polynomial_functions"], "64");
}

#[test]
fn idealization_target_from_expression() {
    let (code, v) = json(&["member", "(C(X,2) ; 0) over Z(+)Z/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["params"]["target"], "idealization:Z(+)Z/3,0");
    assert_eq!(json(&["member", "(C(X,2) ; 0) over Z(+)Z", "--k", "0"]).0, 1);
    let out = ivpoly(&["member", "(2*C(X,2) ; 0) over Z(+)Z", "--module", "Z/3"]);
    assert_eq!(out.status.code(), Some(2));
}
