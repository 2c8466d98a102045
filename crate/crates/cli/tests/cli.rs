use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kottsep_cli::envelope::Envelope;
use serde_json::{json, Value};
use tempfile::TempDir;

fn kottsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kottsep")).args(args).env_remove("KOTTSEP_CONFIG").output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs `args` with `--out` into `dir` and returns the certificate path.
fn emit(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.path().join(name);
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", s(&out)]);
    let o = kottsep(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    out
}

fn verify_code(path: &Path) -> Option<i32> {
    kottsep(&["verify", s(path)]).status.code()
}

fn fixtures(dir: &TempDir) -> Vec<(String, Vec<String>)> {
    let set3 = write(
        dir,
        "set3.json",
        r#"{"dim": 3, "members": ["+00","-00","0+0","0-0","00+","00-","++0","--0","+-+","-+-","0++","0--"]}"#,
    );
    let set2 = write(dir, "set2.json", r#"{"dim": 2, "members": ["+0","-0","0+","0-","++","--"]}"#);
    let base = write(dir, "base.json", r#"["+","-"]"#);
    let l1 = write(dir, "l1.json", r#"{"dim": 3, "norm": {"type": "lp", "p": "1"}}"#);
    let linf = write(dir, "linf.json", r#"{"dim": 2, "norm": {"type": "lp", "p": "inf"}}"#);
    let l2 = write(dir, "l2.json", r#"{"dim": 3, "norm": {"type": "lp", "p": 2}}"#);
    let cut = write(
        dir,
        "cut.json",
        r#"{"dim": 3, "norm": {"type": "polytope_facets", "functionals": [["1","0","0"],["0","1","0"],["0","0","1"],["2/3","2/3","2/3"]]}}"#,
    );
    let cinf = write(dir, "cinf.json", r#"{"dim": 2, "field": "complex", "norm": {"type": "lp", "p": "inf"}}"#);
    let v = |a: &[&str]| a.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        ("kottman4".into(), v(&["kottman", "4"])),
        ("kottman7".into(), v(&["kottman", "7"])),
        ("sumfree3".into(), v(&["sumfree", "3"])),
        ("gaussian6".into(), v(&["gaussian", "6"])),
        ("gaussian9".into(), v(&["gaussian", "9", "--strategy", "theorem-backed"])),
        ("witness_diff".into(), v(&["witness", "diff", "6"])),
        ("witness_sum".into(), v(&["witness", "sum", "5"])),
        ("free_diff".into(), v(&["free", "diff", "--set", s(&set3)])),
        ("free_sum".into(), v(&["free", "sum", "--set", s(&set3)])),
        ("extend".into(), v(&["extend", "--set", s(&set2), "--base", s(&base)])),
        ("grid".into(), v(&["grid", "4"])),
        ("auerbach_l1".into(), v(&["auerbach", "--norm", s(&l1)])),
        ("auerbach_l2".into(), v(&["auerbach", "--norm", s(&l2)])),
        ("sep_l1".into(), v(&["separate", "diff", "--norm", s(&l1)])),
        ("sep_cut".into(), v(&["separate", "sum", "--norm", s(&cut)])),
        ("sep_l2".into(), v(&["separate", "diff", "--norm", s(&l2)])),
        ("sep_linf".into(), v(&["separate", "diff", "--norm", s(&linf)])),
        ("sep_complex".into(), v(&["separate", "complex", "--norm", s(&cinf)])),
    ]
}

#[test]
fn every_certificate_round_trips() {
    let dir = TempDir::new().unwrap();
    for (name, args) in fixtures(&dir) {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let cert = emit(&dir, &format!("{name}.json"), &args);
        assert_eq!(verify_code(&cert), Some(0), "{name}");
    }
}

/// Every leaf of a JSON value, as a path of keys and indices.
fn leaves(v: &Value, path: Vec<Value>, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, c)| leaves(c, [path.clone(), vec![json!(k)]].concat(), out)),
        Value::Array(a) => {
            a.iter().enumerate().for_each(|(i, c)| leaves(c, [path.clone(), vec![json!(i)]].concat(), out))
        }
        _ => out.push(path),
    }
}

fn at<'a>(v: &'a mut Value, path: &[Value]) -> &'a mut Value {
    path.iter().fold(v, |cur, k| match k {
        Value::String(key) => &mut cur[key.as_str()],
        Value::Number(i) => &mut cur[i.as_u64().unwrap() as usize],
        _ => unreachable!(),
    })
}

fn tampered(leaf: &Value) -> Value {
    match leaf {
        Value::Bool(b) => json!(!b),
        Value::Number(n) if n.is_u64() => json!(n.as_u64().unwrap() + 1),
        Value::Number(n) => json!(n.as_f64().unwrap() * 2.0 + 1.0),
        Value::String(s) if s.starts_with('+') => json!(s.replacen('+', "-", 1)),
        Value::String(s) => json!(format!("{s}0")),
        Value::Null => json!(1),
        _ => unreachable!(),
    }
}

#[test]
fn any_single_field_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    for (name, args) in
        fixtures(&dir).into_iter().filter(|(n, _)| ["kottman4", "free_diff", "sep_l1", "grid"].contains(&n.as_str()))
    {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let cert = emit(&dir, &format!("{name}.json"), &args);
        let original: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
        let mut paths = Vec::new();
        leaves(&original, Vec::new(), &mut paths);
        for path in paths {
            if path.last() == Some(&json!("wall_time_ms")) {
                continue;
            }
            let mut v = original.clone();
            let leaf = at(&mut v, &path);
            *leaf = tampered(leaf);
            let bad = dir.path().join("bad.json");
            std::fs::write(&bad, v.to_string()).unwrap();
            let code = verify_code(&bad);
            assert_eq!(code, Some(2), "{name} {path:?}");
        }
    }
}

/// Tampering that also recomputes the digest must still be caught by the
/// independent checks.
#[test]
fn resealed_forgeries_are_caught() {
    let dir = TempDir::new().unwrap();
    let reseal = |path: &Path, edit: &dyn Fn(&mut Value)| -> Option<i32> {
        let mut e: Envelope = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        edit(&mut e.payload);
        e.digest = e.compute_digest();
        let bad = dir.path().join("forged.json");
        std::fs::write(&bad, e.to_pretty()).unwrap();
        verify_code(&bad)
    };
    let k = emit(&dir, "k.json", &["kottman", "4"]);
    assert_eq!(reseal(&k, &|p| p["value"] = json!(2)), Some(2));
    assert_eq!(reseal(&k, &|p| p["upper"]["sets_examined"] = json!(2047)), Some(2));

    let dirset = write(&dir, "set.json", r#"{"dim": 2, "members": ["+0","-0","0+","0-","++","--"]}"#);
    let f = emit(&dir, "f.json", &["free", "diff", "--set", s(&dirset)]);
    assert_eq!(reseal(&f, &|p| p["witness"] = json!(["+0", "0+", "++"])), Some(2));
    assert_eq!(reseal(&f, &|p| p["claimed_size"] = json!(4)), Some(2));

    let l1 = write(&dir, "l1.json", r#"{"dim": 3, "norm": {"type": "lp", "p": "1"}}"#);
    let sep = emit(&dir, "sep.json", &["separate", "diff", "--norm", s(&l1)]);
    assert_eq!(reseal(&sep, &|p| p["family"]["points"][1] = json!({"exact": ["1", "0", "0"]})), Some(2));
    assert_eq!(reseal(&sep, &|p| p["family"]["coefficients"][0] = json!("0+0")), Some(2));

    let w = emit(&dir, "w.json", &["witness", "diff", "5"]);
    assert_eq!(reseal(&w, &|p| p["max_free"] = json!(3)), Some(2));
}

#[test]
fn usage_errors_exit_4() {
    let dir = TempDir::new().unwrap();
    assert_eq!(kottsep(&[]).status.code(), Some(4));
    assert_eq!(kottsep(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(kottsep(&["kottman", "x"]).status.code(), Some(4));
    assert_eq!(kottsep(&["kottman", "1"]).status.code(), Some(4));
    assert_eq!(kottsep(&["free", "diff", "--set", "/no/such/file.json"]).status.code(), Some(4));
    assert_eq!(kottsep(&["grid", "3", "--budget", "no_such_budget=1"]).status.code(), Some(4));
    assert_eq!(kottsep(&["selftest", "--only", "11"]).status.code(), Some(4));
    let not_admissible = write(&dir, "na.json", r#"{"dim": 2, "members": ["+0","-0"]}"#);
    let o = kottsep(&["free", "diff", "--set", s(&not_admissible)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!o.stderr.is_empty());
    assert_eq!(kottsep(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_errors_exit_3() {
    assert_eq!(kottsep(&["kottman", "5", "--strategy", "exhaustive"]).status.code(), Some(3));
    assert_eq!(kottsep(&["gaussian", "7", "--strategy", "exhaustive"]).status.code(), Some(3));
    assert_eq!(kottsep(&["grid", "6"]).status.code(), Some(3));
    assert_eq!(
        kottsep(&["kottman", "4", "--strategy", "exhaustive", "--budget", "enumeration_max_sets=100"]).status.code(),
        Some(3)
    );
    // auto falls back to the closed form instead
    let o = kottsep(&["kottman", "4", "--budget", "enumeration_max_sets=100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["payload"]["upper"]["method"], "theorem_backed");
}

#[test]
fn config_file_and_overrides() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", "seed = 5\n[budgets]\nrandom_trials = 3\n");
    let o = kottsep(&["kottman", "9", "--config", s(&cfg), "--budget", "random_trials=4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["manifest"]["seed"], 5);
    assert_eq!(v["manifest"]["budgets"]["random_trials"], 4);
    assert_eq!(v["payload"]["upper"]["random_evidence"]["trials"], 4);

    let o =
        Command::new(env!("CARGO_BIN_EXE_kottsep")).args(["grid", "2"]).env("KOTTSEP_CONFIG", &cfg).output().unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["manifest"]["seed"], 5);

    let bad = write(&dir, "bad.toml", "[budgets]\nnot_a_budget = 1\n");
    assert_eq!(kottsep(&["grid", "2", "--config", s(&bad)]).status.code(), Some(4));
}

#[test]
fn identical_runs_give_identical_certificates() {
    let dir = TempDir::new().unwrap();
    let l2 = write(&dir, "l2.json", r#"{"dim": 4, "norm": {"type": "lp", "p": "3/2"}}"#);
    for args in [
        vec!["kottman", "8", "--seed", "11"],
        vec!["auerbach", "--norm", s(&l2), "--seed", "3"],
        vec!["separate", "sum", "--norm", s(&l2), "--threads", "2"],
    ] {
        let strip = |o: Output| {
            let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
            v["manifest"]["wall_time_ms"] = json!(0);
            v
        };
        let a = strip(kottsep(&args));
        let b = strip(kottsep(&args));
        assert_eq!(a, b, "{args:?}");
    }
}
