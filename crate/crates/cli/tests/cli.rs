use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uldl")).args(args).output().expect("run uldl")
}

fn json(args: &[&str]) -> Vec<Value> {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn one(args: &[&str]) -> Value {
    let mut v = json(args);
    assert_eq!(v.len(), 1);
    v.remove(0)
}

#[test]
fn dof_examples() {
    let r = one(&["dof", "2", "3", "3", "2"]);
    assert_eq!(r["sum_dof"], "8/3");
    assert_eq!(r["sum_dof_decimal"], "2.666667");
    assert!(r["regimes"].as_str().unwrap().split(';').any(|k| k == "5"));

    let r = one(&["dof", "1", "1", "1", "1"]);
    for k in ["sum_dof", "mimo_ic_upper", "single_cell_lower", "conventional_upper", "scheme1", "scheme2"] {
        assert_eq!(r[k], "1", "{k}");
    }

    let r = one(&["dof", "2", "6", "3", "4"]);
    assert_eq!(r["sum_dof"], r["scheme1"]);
}

#[test]
fn gain_examples() {
    assert_eq!(one(&["gain", "1"])["rendered"], "0.0000");
    assert_eq!(one(&["gain", "2"])["rendered"], "0.1250");
    assert_eq!(one(&["gain", "8"])["rendered"], "0.2598");
    let w = json(&["gain", "3", "--witness", "50"]);
    assert!(w.iter().any(|r| r["record"] == "witness"
        && (r["m1"].as_u64(), r["m2"].as_u64(), r["n1"].as_u64(), r["n2"].as_u64()) == (Some(2), Some(3), Some(3), Some(2))
        && r["sum_dof"] == "8/3"));
}

#[test]
fn curve_examples() {
    let rows = json(&["curve", "--n", "5", "--from", "1", "--to", "10"]);
    assert_eq!(rows.len(), 10);
    let at = |m: u64| rows.iter().find(|r| r["m"].as_u64() == Some(m)).unwrap()["sum_dof"].clone();
    assert_eq!(at(2), "16/5");
    assert_eq!(at(5), "5");
    assert_eq!(at(7), "45/7");
}

#[test]
fn table2_examples() {
    let rows = json(&["table2", "4"]);
    assert_eq!(rows.len(), 256);
    assert!(rows.iter().all(|r| r["agree"] == true));
    let r = rows
        .iter()
        .find(|r| [r["m1"].as_u64(), r["m2"].as_u64(), r["n1"].as_u64(), r["n2"].as_u64()] == [Some(2), Some(3), Some(3), Some(2)])
        .unwrap();
    assert_eq!((r["d1"].as_str(), r["d2"].as_str(), r["dmax"].as_str()), (Some("8/3"), Some("2"), Some("8/3")));
    assert_eq!(json(&["table2", "1"]).len(), 1);
}

#[test]
fn simulate_examples() {
    let rows = json(&["simulate", "1", "2", "2", "1", "--t", "1", "--scheme", "1", "--seeds", "100"]);
    assert_eq!(rows.len(), 101);
    let s = rows.last().unwrap();
    assert_eq!(s["achieved_dof"], "3/8");
    assert!(s["passed"].as_u64().unwrap() >= 99);

    let s = json(&["simulate", "--simple", "--n1", "3", "--seeds", "100"]).pop().unwrap();
    assert_eq!(s["achieved_dof"], "5/3");

    let s = json(&["simulate", "1", "2", "2", "1", "--t", "3"]).pop().unwrap();
    assert_eq!(s["achieved_dof"], "27/32");

    let s = json(&["simulate", "2", "1", "1", "2", "--scheme", "2", "--seeds", "5"]).pop().unwrap();
    assert_eq!(s["passed"], 5);
}

#[test]
fn seeds_are_ordered() {
    let rows = json(&["simulate", "1", "2", "2", "1", "--seeds", "20", "--seed", "7"]);
    let seeds: Vec<u64> = rows[..20].iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (7..27).collect::<Vec<_>>());
}

#[test]
fn delayed_examples() {
    let rows = json(&["delayed", "--seeds", "1000"]);
    let s = rows.last().unwrap();
    assert_eq!(s["dof"], "5/4");
    assert!(s["passed"].as_u64().unwrap() >= 990);
    assert!(s["max_abs_error_p99"].as_f64().unwrap() < 1e-6);
}

#[test]
fn hotspot_examples() {
    let r = one(&["hotspot", "2", "2", "6", "3", "4"]);
    assert_eq!((r["upper"].as_str(), r["lower"].as_str()), (Some("4"), Some("14/3")));
    assert_eq!(one(&["hotspot", "1", "2", "3", "3", "2"])["lower"], "8/3");
    let r = one(&["hotspot", "1", "1", "1", "1", "1"]);
    assert_eq!((r["upper"].as_str(), r["lower"].as_str()), (Some("1"), Some("1")));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["simulate", "1", "2", "2", "1", "--t", "2", "--seeds", "8", "--seed", "3"][..],
        &["delayed", "--seeds", "1"],
        &["table2", "3", "--csv"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
    assert_ne!(run(&["delayed", "--seed", "1"]).stdout, run(&["delayed", "--seed", "2"]).stdout);
}

#[test]
fn csv_has_header_and_lf_endings() {
    let out = String::from_utf8(run(&["curve", "--csv", "--from", "1", "--to", "3"]).stdout).unwrap();
    assert!(!out.contains('\r'));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("record,m,n,m1,m2,n1,n2,sum_dof"));
    assert!(lines[1].starts_with("curve,1,5,1,5,5,1,9/5,"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["dof", "0", "1", "1", "1"]).status.code(), Some(1));
    assert_eq!(run(&["dof", "1", "1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["simulate"]).status.code(), Some(1));
    assert_eq!(run(&["dof", "1", "1", "1", "1", "--csv", "--json"]).status.code(), Some(1));
    let out = run(&["simulate", "1", "2", "2", "1", "--lambda1", "1", "--lambda2", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N1 lambda1 <= M1"));
    let out = run(&["simulate", "1", "1", "13", "1", "--lambda1", "1/13", "--lambda2", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
