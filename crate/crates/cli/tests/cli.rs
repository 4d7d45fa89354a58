use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde::{Deserialize, Serialize};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinbranch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Report {
    check: String,
    params: BTreeMap<String, Value>,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
    runtime_ms: u64,
}

#[test]
fn composition_tables_match_golden_and_theory() {
    let csv = stdout(&["table", "composition", "--n", "4", "--imax", "2", "--jmax", "2"]);
    assert_eq!(csv, golden("composition_n4.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,i,j,parity,ff,ft,tf,tt,depth,stabilized"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (i, j, p): (usize, usize, usize) = (f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap());
        let want = if j <= i && (i + j) % 2 == p { ["1", "0", "0", "1"] } else { ["0", "0", "1", "0"] };
        assert_eq!(&f[4..8], &want, "{line}");
        assert_eq!(f[9], "true");
    }
    let json = stdout(&["table", "composition", "--n", "5", "--imax", "2", "--jmax", "2", "--format", "json"]);
    assert_eq!(json, golden("composition_n5.json"));
}

#[test]
fn lattice_tables_match_golden_and_theory() {
    let csv = stdout(&["table", "lattice", "--n", "4", "--imax", "4", "--jmax", "4"]);
    assert_eq!(csv, golden("lattice_n4.csv"));
    let mut total: BTreeMap<(String, String), usize> = BTreeMap::new();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        *total.entry((f[1].to_string(), f[2].to_string())).or_default() += f[5].parse::<usize>().unwrap();
    }
    assert_eq!(total.len(), 49);
    for ((l, v), t) in total {
        // λ0 = −5/2 − i, ν0 = −2 − j on the lattice when j ≤ i
        let i = -(parse(&l) + 2.5);
        let j = -(parse(&v) + 2.0);
        let on = i >= 0.0 && j >= 0.0 && j <= i;
        assert_eq!(t, if on { 3 } else { 2 }, "({l}, {v})");
    }
    let json = stdout(&["table", "lattice", "--n", "5", "--imax", "2", "--jmax", "2", "--format", "json"]);
    assert_eq!(json, golden("lattice_n5.json"));
}

fn parse(s: &str) -> f64 {
    match s.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn empty_range_gives_header_only() {
    let csv = stdout(&["table", "lattice", "--n", "4", "--imin", "3", "--imax", "2"]);
    assert_eq!(csv, "n,lambda0,nu0,sector,depth,dim,stabilized\n");
    assert_eq!(csv, golden("lattice_empty.csv"));
    let csv = stdout(&["table", "composition", "--n", "4", "--jmin", "3", "--jmax", "1"]);
    assert_eq!(csv, "n,i,j,parity,ff,ft,tf,tt,depth,stabilized\n");
}

#[test]
fn verify_stream_round_trips_and_is_deterministic() {
    let a = stdout(&["--no-timing", "verify", "gegenbauer", "--max-deg", "10"]);
    let b = stdout(&["verify", "gegenbauer", "--max-deg", "10", "--no-timing"]);
    assert_eq!(a, b);
    assert_eq!(a, golden("verify_gegenbauer.jsonl"));
    for line in a.lines() {
        let r: Report = serde_json::from_str(line).unwrap();
        assert_eq!(r.status, "pass");
        assert_eq!(serde_json::to_string(&r).unwrap(), line);
    }
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "lambda", "--n", "4", "--imax", "3"][..],
        &["verify", "kernels", "--n", "4", "--kmax", "5"],
        &["verify", "branching", "--n", "3", "--imax", "3"],
        &["verify", "projection", "--n", "4", "--kmax", "2"],
    ] {
        let out = stdout(args);
        assert!(out.lines().count() > 0, "{args:?}");
        for line in out.lines() {
            let r: Report = serde_json::from_str(line).unwrap();
            assert_eq!(r.status, "pass", "{args:?}: {line}");
        }
    }
}

#[test]
fn multiplicity_examples() {
    let get = |args: &[&str]| -> Value { serde_json::from_str(&stdout(args)).unwrap() };
    let v = get(&["multiplicity", "--n", "4", "--lambda", "0", "--nu", "0"]);
    assert_eq!(v["total"], 2);
    let v = get(&["multiplicity", "--n", "4", "--lambda", "-5/2", "--nu", "-2"]);
    assert_eq!((v["total"].as_u64(), v["on_lattice"].as_bool()), (Some(3), Some(true)));
    let v = get(&["multiplicity", "--n", "5", "--lambda", "-3", "--nu", "-5/2", "--depth", "10"]);
    assert_eq!(v["total"], 3);
    let v = get(&["multiplicity", "--n", "4", "--lambda", "−7/2", "--nu", "-2", "--sector", "minus"]);
    assert_eq!((v["dim_minus"].as_u64(), v["total"].is_null()), (Some(2), true));
}

#[test]
fn kernel_normal_forms_match_golden() {
    assert_eq!(stdout(&["kernel", "--family", "B+", "--n", "3", "--index", "1"]), golden("kernel_bplus_n3_k1.txt"));
    assert_eq!(stdout(&["kernel", "--family", "C-", "--n", "4", "--index", "2", "--format", "json"]), golden("kernel_cminus_n4_l2.json"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["multiplicity", "--n", "4", "--lambda", "0.5", "--nu", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "projection", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--family", "Q+", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "--family", "B+", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "gegenbauer", "--max-deg", "2"]).status.code(), Some(0));
}
