//! Acceptance gate: one PASS/FAIL line per criterion, then the command-line
//! examples. Exits nonzero when anything fails.

use std::process::{Command, Output};

use kottsep_cli::acceptance::{claims_table, Suite};
use serde_json::Value;

fn kottsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kottsep")).args(args).output().expect("binary runs")
}

fn payload(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("certificate JSON");
    v["payload"].clone()
}

fn cli_examples() -> Vec<(&'static str, Result<(), String>)> {
    let dir = tempfile::tempdir().expect("temp dir");
    let l1 = dir.path().join("l1_dim3.json");
    std::fs::write(&l1, r#"{"dim": 3, "field": "real", "norm": {"type": "lp", "p": "1"}}"#).unwrap();
    let l1 = l1.to_str().unwrap().to_string();

    let kottman = {
        let out = kottsep(&["kottman", "4"]);
        let p = payload(&out);
        let ok = out.status.code() == Some(0)
            && p["value"] == 3
            && p["upper"]["method"] == "exhaustive"
            && p["upper"]["sets_examined"] == 2048;
        ok.then_some(()).ok_or(format!("kottman 4 gave {p}"))
    };
    let separate = {
        let out = kottsep(&["separate", "diff", "--norm", &l1]);
        let p = payload(&out);
        let f = &p["family"];
        let ok = out.status.code() == Some(0)
            && f["points"].as_array().map(Vec::len) == Some(4)
            && f["margin"]["exact"] == "1";
        ok.then_some(()).ok_or(format!("separate diff gave {f}"))
    };
    let grid = {
        let out = kottsep(&["grid", "3"]);
        let p = payload(&out);
        let mut example: Vec<(u64, u64)> = p["example"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|q| (q["k"].as_u64().unwrap_or(0), q["m"].as_u64().unwrap_or(0)))
            .collect();
        example.sort();
        let ok = out.status.code() == Some(0) && p["max_size"] == 3 && example == [(1, 2), (2, 3), (3, 1)];
        ok.then_some(()).ok_or(format!("grid 3 gave {p}"))
    };
    let mutant = {
        let out = kottsep(&["selftest", "--only", "2", "--mutant", "off-by-one"]);
        (out.status.code() == Some(2)).then_some(()).ok_or(format!("mutant selftest exited {:?}", out.status.code()))
    };
    vec![
        ("kottman 4: value 3, exhaustive over 2048 sets", kottman),
        ("separate diff on l1, dim 3: 4 points, margin 1", separate),
        ("grid 3: maximum 3 with (1,2), (2,3), (3,1)", grid),
        ("selftest with an off-by-one freeness check exits 2", mutant),
    ]
}

fn main() {
    let outcomes = Suite::default().run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    println!();
    print!("{}", claims_table(&outcomes));
    println!();
    let examples = cli_examples();
    for (name, result) in &examples {
        match result {
            Ok(()) => println!("cli  PASS  {name}"),
            Err(e) => println!("cli  FAIL  {name}: {e}"),
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count() + examples.iter().filter(|(_, r)| r.is_err()).count();
    if failed > 0 {
        println!("\n{failed} acceptance checks failed");
        std::process::exit(1);
    }
    println!("\nall acceptance checks passed");
}
