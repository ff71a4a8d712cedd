use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cqrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqrac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn sample_manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples/magic_square.json")
}

#[test]
fn context_counts() {
    for (n, count) in [("2", 6), ("4", 270), ("6", 1458)] {
        let v = json(&cqrac(&["contexts", "--n", n]));
        assert_eq!(v["count"], count, "n = {n}");
        assert_eq!(v["run"]["command"], "contexts");
    }
    let v = json(&cqrac(&["contexts", "--n", "4", "--verify-brute-force"]));
    assert_eq!(v["brute_force"]["matches"], true);
    assert_eq!(v["generated"], 162);
    assert_eq!(v["bipartite"], 108);
}

#[test]
fn context_jsonl_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("ctx.jsonl");
    let out = cqrac(&["contexts", "--n", "2", "--format", "csv", "--jsonl", jsonl.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# run={"));
    assert!(lines.next().unwrap().starts_with("n,count"));
    assert!(lines.next().unwrap().starts_with("2,6,"));
    let records = std::fs::read_to_string(jsonl).unwrap();
    assert_eq!(records.lines().count(), 6);
    for line in records.lines() {
        cqrac::context::ContextRecord::parse_line(line).unwrap();
    }
}

#[test]
fn brute_force_beyond_cap_is_resource_error() {
    let out = cqrac(&["contexts", "--n", "6", "--verify-brute-force"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn encode_retrieve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    let transcript = dir.path().join("t.csv");
    let out = cqrac(&["encode", "--n", "2", "--bits", "1001", "--out", manifest.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["data"], "1001");
    assert_eq!(m["report"]["matched"], 9);
    assert_eq!(m["run"]["n"], 2);

    let v = json(&cqrac(&[
        "retrieve",
        "--manifest",
        manifest.to_str().unwrap(),
        "--all-bits",
        "--trials",
        "50",
        "--seed",
        "7",
        "--transcript",
        transcript.to_str().unwrap(),
    ]));
    assert_eq!(v["decoded"], "1001");
    assert!(v["bit_error_rate"].as_f64().unwrap() < 0.1);
    let log = std::fs::read_to_string(&transcript).unwrap();
    let mut lines = log.lines();
    assert!(lines.next().unwrap().starts_with("# run="));
    assert_eq!(lines.next().unwrap(), "trial,observable,step,state_id,outcome,discarded");
    let ids: Vec<u64> = m["states"].as_array().unwrap().iter().map(|s| s["id"].as_u64().unwrap()).collect();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6);
        assert!(ids.contains(&cells[3].parse().unwrap()));
        assert!(cells[4] == "1" || cells[4] == "-1");
    }
}

#[test]
fn retrieval_is_reproducible() {
    let m = sample_manifest();
    let args = ["retrieve", "--manifest", m.to_str().unwrap(), "--all-bits", "--trials", "20", "--seed", "3"];
    let a = json(&cqrac(&args));
    let b = json(&cqrac(&args));
    assert_eq!(a["bits"], b["bits"]);
}

#[test]
fn magic_square_parity_filtering() {
    let m = sample_manifest();
    let v = json(&cqrac(&[
        "retrieve",
        "--manifest",
        m.to_str().unwrap(),
        "--observable",
        "Z1X2",
        "--T",
        "3",
        "--trials",
        "2000",
    ]));
    let p = &v["parities"][0];
    assert_eq!(p["observable"], "ZX");
    assert_eq!(p["target"], -1);
    // One definite state and two unbiased ones: a wrong majority needs both
    // unbiased states to survive with +1, or one of them plus a lost coin
    // flip, 1/64 + 3/32.
    let rate = p["match_rate"].as_f64().unwrap();
    assert!((rate - (1.0 - 1.0 / 64.0 - 3.0 / 32.0)).abs() < 0.03, "{rate}");
    assert_eq!(v["sample_bound"], 9.0);

    let single = json(&cqrac(&["retrieve", "--manifest", m.to_str().unwrap(), "--observable", "6", "--T", "3"]));
    assert_eq!(single["parities"][0]["observable"], "ZX");
}

#[test]
fn magic_square_context_query() {
    let m = sample_manifest();
    let v = json(&cqrac(&[
        "retrieve",
        "--manifest",
        m.to_str().unwrap(),
        "--context",
        "XX,YY,ZZ",
        "--T",
        "6",
        "--trials",
        "200",
    ]));
    let parities = v["parities"].as_array().unwrap();
    assert_eq!(parities.len(), 3);
    let targets: Vec<i64> = parities.iter().map(|p| p["target"].as_i64().unwrap()).collect();
    assert_eq!(targets, [1, -1, 1]);
    for p in parities {
        assert!(p["match_rate"].as_f64().unwrap() > 0.8);
    }
    let bad = cqrac(&["retrieve", "--manifest", m.to_str().unwrap(), "--context", "XX,XY"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Wrong data length.
    assert_eq!(cqrac(&["encode", "--n", "2", "--bits", "101"]).status.code(), Some(2));
    // Not a bit string.
    assert_eq!(cqrac(&["encode", "--n", "2", "--bits", "10a1"]).status.code(), Some(2));
    // pi/4 prefix of the wrong length.
    assert_eq!(cqrac(&["encode", "--n", "2", "--pi4-bits", "5"]).status.code(), Some(2));
    // Missing files.
    let missing = dir.path().join("none.json");
    assert_eq!(
        cqrac(&["retrieve", "--manifest", missing.to_str().unwrap(), "--bit", "0"]).status.code(),
        Some(3)
    );
    assert_eq!(
        cqrac(&["encode", "--n", "2", "--data", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
    // Malformed manifest.
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"format\": \"cqrac-manifest/1\"").unwrap();
    assert_eq!(
        cqrac(&["retrieve", "--manifest", broken.to_str().unwrap(), "--bit", "0"]).status.code(),
        Some(2)
    );
    // Malformed circuit parameters.
    assert_eq!(cqrac(&["emit-circuit", "--params", "10,00"]).status.code(), Some(2));
    assert_eq!(cqrac(&["emit-circuit", "--params", "100,03"]).status.code(), Some(2));
    // Odd register.
    assert_eq!(cqrac(&["contexts", "--n", "3"]).status.code(), Some(2));
    // Missing required query.
    assert_eq!(cqrac(&["retrieve", "--manifest", "x"]).status.code(), Some(2));
}

#[test]
fn unresolved_retrieval_exits_five() {
    // Two unbiased states at many steps: both are almost surely dropped.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let text = std::fs::read_to_string(sample_manifest()).unwrap();
    let mut m: Value = serde_json::from_str(&text).unwrap();
    m["states"] = serde_json::json!([{ "id": 9, "params": "001,01" }, { "id": 17, "params": "001,02" }]);
    std::fs::write(&path, m.to_string()).unwrap();
    let out = cqrac(&["retrieve", "--manifest", path.to_str().unwrap(), "--observable", "XX", "--T", "40"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn emit_circuit_structure() {
    let out = cqrac(&["emit-circuit", "--params", "001,01", "--measure", "ZX"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("// run={"));
    assert!(text.contains("OPENQASM 2.0;"));
    assert!(text.contains("measure"));
    let plain = String::from_utf8(cqrac(&["emit-circuit", "--params", "001,01"]).stdout).unwrap();
    assert!(!plain.contains("measure"));
}

#[test]
fn analyze_outputs() {
    let v = json(&cqrac(&["analyze", "--epsilon-star", "16"]));
    let e = v["optima"][0]["epsilon"].as_f64().unwrap();
    assert!((e - 0.048).abs() < 0.002, "{e}");

    let v = json(&cqrac(&["analyze", "--crossovers", "--epsilon", "0.048"]));
    let c = &v["crossovers"][0];
    assert_eq!(c["repetitions"], 243);
    assert_eq!(c["vs_rac"], 14);
    assert_eq!(c["vs_qrac_upper"], 16);
    assert_eq!(c["compression"], 18);

    let v = json(&cqrac(&["analyze", "--apps", "44,100", "--epsilon", "0.048"]));
    let apps = v["applications"].as_array().unwrap();
    assert_eq!(apps.len(), 2);
    let ratio44 = apps[0]["ratio"].as_f64().unwrap();
    assert!((ratio44 / 5.84e-8 - 1.0).abs() < 0.01, "{ratio44}");

    let out = cqrac(&["analyze", "--table2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows[0], "d,f_dit,f_bit");
    assert_eq!(rows.len(), 7);

    let out = cqrac(&["analyze", "--curves", "--sizes", "4", "--step", "0.1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2 + 4);
}

#[test]
fn sweep_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = cqrac(&["sweep2q", "--samples", "2000", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# run="));
    assert_eq!(lines[1], "config_id,occurrences,min_avg_Smix,restrictions,star");
    assert_eq!(lines.len(), 2 + 512);
    let total: u64 = lines[2..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 2000);
}
