#![allow(dead_code)]

use std::process::{Command, Output};

use serde_json::{Map, Value};

pub const BIN: &str = env!("CARGO_BIN_EXE_gl2calc");

pub const CONFIG_KEYS: [&str; 5] = ["order", "tol", "radius", "mu1", "mu2"];
pub const CASE_KEYS: [&str; 10] = [
    "suite", "label", "mode", "point", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass",
];
pub const POINT_KEYS: [&str; 4] = ["t", "s", "eps1", "eps2"];
pub const SUMMARY_KEYS: [&str; 2] = ["total", "failures"];

/// Operators in and out of normal form, with rationals, powers, `Dinv`
/// and the weighted derivations.
pub const CORPUS: [&str; 16] = [
    "0",
    "1",
    "-3/4",
    "a",
    "Dinv",
    "da*a - a*da",
    "a*da + b*db + c*dc + d*dd",
    "wa*wd - wb*wc",
    "c^2",
    "c*wb",
    "wb*wb",
    "(a + b)^3 - 2*a*b*c",
    "dd*d^2*da - 5/3*b*Dinv^2",
    "a*d - b*c",
    "(a*d - b*c)*Dinv",
    "db^2*c^2 + (1/2)*wa*Dinv*a",
];

pub fn gl2calc(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("gl2calc runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn keys_in_order(obj: &Map<String, Value>, want: &[&str], what: &str) -> Result<(), String> {
    let got: Vec<&str> = obj.keys().map(String::as_str).collect();
    if got == want {
        Ok(())
    } else {
        Err(format!("{what} keys {got:?}, expected {want:?}"))
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, String> {
    v.as_object().ok_or_else(|| format!("{what} is not an object"))
}

fn pair(v: &Value, what: &str) -> Result<(), String> {
    match v.as_array() {
        Some(a) if a.len() == 2 && a.iter().all(Value::is_number) => Ok(()),
        _ => Err(format!("{what} is not a [re, im] pair")),
    }
}

fn float_or_null(v: &Value, what: &str) -> Result<(), String> {
    if v.is_null() || v.is_number() {
        Ok(())
    } else {
        Err(format!("{what} is neither a number nor null"))
    }
}

fn check_case(i: usize, case: &Value) -> Result<bool, String> {
    let c = object(case, &format!("case {i}"))?;
    keys_in_order(c, &CASE_KEYS, &format!("case {i}"))?;
    for key in ["suite", "label"] {
        if !c[key].is_string() {
            return Err(format!("case {i}: {key} is not a string"));
        }
    }
    if !matches!(c["mode"].as_str(), Some("symbolic" | "numeric")) {
        return Err(format!("case {i}: bad mode {}", c["mode"]));
    }
    if !c["point"].is_null() {
        let p = object(&c["point"], &format!("case {i} point"))?;
        keys_in_order(p, &POINT_KEYS, &format!("case {i} point"))?;
        if !(p["t"].is_number() && p["s"].is_number() && p["eps1"].is_u64() && p["eps2"].is_u64()) {
            return Err(format!("case {i}: bad point {}", c["point"]));
        }
    }
    for key in ["lhs", "rhs"] {
        if !c[key].is_null() {
            pair(&c[key], &format!("case {i} {key}"))?;
        }
    }
    for key in ["abs_err", "rel_err", "tol"] {
        float_or_null(&c[key], &format!("case {i} {key}"))?;
    }
    c["pass"]
        .as_bool()
        .ok_or_else(|| format!("case {i}: pass is not a bool"))
}

/// Validates a report against the JSON schema, key order included, and
/// returns the number of failing cases.
pub fn check_report_schema(text: &str) -> Result<usize, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let top = object(&v, "report")?;
    keys_in_order(top, &["config", "cases", "summary"], "report")?;
    let config = object(&top["config"], "config")?;
    keys_in_order(config, &CONFIG_KEYS, "config")?;
    if !config["order"].is_u64() || !config["tol"].is_number() || !config["radius"].is_number() {
        return Err("config: order, tol or radius has the wrong type".into());
    }
    pair(&config["mu1"], "config mu1")?;
    pair(&config["mu2"], "config mu2")?;
    let cases = top["cases"].as_array().ok_or("cases is not an array")?;
    let mut failures = 0;
    for (i, case) in cases.iter().enumerate() {
        if !check_case(i, case)? {
            failures += 1;
        }
    }
    let summary = object(&top["summary"], "summary")?;
    keys_in_order(summary, &SUMMARY_KEYS, "summary")?;
    if summary["total"].as_u64() != Some(cases.len() as u64) {
        return Err(format!("summary total {} but {} cases", summary["total"], cases.len()));
    }
    if summary["failures"].as_u64() != Some(failures as u64) {
        return Err(format!(
            "summary failures {} but {failures} failing cases",
            summary["failures"]
        ));
    }
    Ok(failures)
}

/// `parse(print(D)) = D` through the binary for every corpus entry;
/// returns the entries that fail.
pub fn round_trip_failures() -> Vec<String> {
    let mut bad = Vec::new();
    for text in CORPUS {
        let first = gl2calc(&["parse", text]);
        let printed = stdout(&first).trim_end().to_string();
        let second = gl2calc(&["parse", &printed]);
        let reprinted = stdout(&second).trim_end().to_string();
        let same = gl2calc_core::parse::parse_operator(text).ok() == gl2calc_core::parse::parse_operator(&printed).ok();
        if !(first.status.success() && second.status.success() && printed == reprinted && same) {
            bad.push(format!("{text:?} -> {printed:?} -> {reprinted:?}"));
        }
    }
    bad
}
