use std::fs;
use std::path::Path;

use simpart::cli::{run_with, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK};

const KS_A: &str = "states 3\nlabel 0 a\nlabel 1 a\nlabel 2 b\ntrans 0 2\ntrans 1 2\ntrans 2 2\n";
const KS_B: &str = "states 2\nlabel 0 a\nlabel 1 a\ntrans 0 0\n";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("simpart").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn compute_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ks_b.txt", KS_B);
    let (code, out, _) = run(&["compute", &f]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "block 0: {0}\nblock 1: {1}\norder: 1 ⊴ 0\n");
}

#[test]
fn compute_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ks_a.txt", KS_A);
    let (code, out, _) = run(&[
        "compute", "--format", "json", "--stats", "--check", "full", &f,
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["partition"], serde_json::json!([[0, 1], [2]]));
    assert_eq!(v["order"], serde_json::json!([]));
    assert_eq!(v["stats"]["new_blocks_total"], 0);

    let (_, out, _) = run(&["compute", "--format", "json", &f]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["stats"].is_null());
}

#[test]
fn compute_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (_, ks, _) = run(&["generate", "random", "12", "2", "0.3", "--seed", "3"]);
    let f = write(dir.path(), "r.txt", &ks);
    assert_eq!(
        run(&["compute", "--stats", &f]),
        run(&["compute", "--stats", &f])
    );
}

#[test]
fn input_errors() {
    let (code, _, err) = run(&["compute", "missing.txt"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cannot open"));

    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "states 2\ntrans 0 5\n");
    assert_eq!(run(&["compute", &f]).0, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(run(&["generate", "random", "4", "2", "1.5"]).0, EXIT_INPUT);
    assert_eq!(run(&["generate", "chain", "0"]).0, EXIT_INPUT);
    assert_eq!(run(&["generate", "tree", "64", "4"]).0, EXIT_INPUT);
    assert_eq!(
        run(&["verify", "--random", "3", "--max-states", "65"]).0,
        EXIT_INPUT
    );
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn generate_kinds() {
    let (code, out, _) = run(&["generate", "chain", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "states 3\nlabel 0 p\nlabel 1 p\nlabel 2 p\ntrans 0 1\ntrans 1 2\n"
    );
    let a = run(&["generate", "random", "8", "2", "0.3", "--seed", "42"]);
    let b = run(&["generate", "random", "8", "2", "0.3", "--seed", "42"]);
    assert_eq!(a, b);
    assert_eq!(a.1, include_str!("data/random_8_2_0.3_seed42.txt"));
    let (_, tree, _) = run(&["generate", "tree", "2", "2"]);
    assert!(tree.starts_with("states 7\n"));
    assert_eq!(tree.lines().filter(|l| l.starts_with("trans")).count(), 6);
    let (_, clique, _) = run(&["generate", "clique", "3"]);
    assert_eq!(clique.lines().filter(|l| l.starts_with("trans")).count(), 6);
}

#[test]
fn verify_file_and_random() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ks_a.txt", KS_A);
    assert_eq!(run(&["verify", &f]).0, EXIT_OK);
    let (code, out, _) = run(&[
        "verify",
        "--random",
        "500",
        "--max-states",
        "8",
        "--seed",
        "11",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("verified 500/500 instances\n"));
}

#[test]
fn verify_detects_a_corrupted_result() {
    let (code, out, _) = run(&[
        "verify",
        "--random",
        "30",
        "--max-states",
        "6",
        "--seed",
        "1",
        "--mutate",
    ]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("mismatch at"));
}

#[test]
fn bench_tables() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);

    for n in [2, 8, 16, 64] {
        let (_, ks, _) = run(&["generate", "chain", &n.to_string()]);
        write(dir.path(), &format!("chain_{n:03}.txt"), &ks);
    }
    let (code, out, _) = run(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().skip(1).all(|l| !l.contains("FAIL")));

    let (code, out, _) = run(&["bench", "--format", "json", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    for r in rows.as_array().unwrap() {
        let want = 2 * (r["sim_blocks"].as_u64().unwrap() - r["initial_blocks"].as_u64().unwrap());
        assert_eq!(r["new_blocks"].as_u64().unwrap(), want);
    }
}
