use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_meandric"));
    cmd.env_remove("MEANDER_CACHE_DIR");
    cmd
}

fn run(cache: &Path, args: &[&str]) -> Output {
    bin()
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("run meandric")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn enumerate_small_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), &["enumerate", "--n", "1", "--format", "json"]));
    assert_eq!(v["counts"], serde_json::json!({"1": 1}));
    let v = json(&run(dir.path(), &["enumerate", "--n", "2", "--format", "json"]));
    assert_eq!(v["counts"], serde_json::json!({"1": 2, "2": 2}));
    let v = json(&run(dir.path(), &["enumerate", "--n", "3", "--format", "json"]));
    assert_eq!(v["counts"], serde_json::json!({"1": 8, "2": 12, "3": 5}));
    assert_eq!(v["polynomial"], serde_json::json!([0, 8, 12, 5]));
    let o = run(dir.path(), &["enumerate", "--n", "3", "--loops", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,loops,count\n3,3,5\n");
}

#[test]
fn enumerate_from_generating_functions_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let brute = json(&run(dir.path(), &["enumerate", "--n", "6", "--format", "json"]));
    let genfun = json(&run(
        dir.path(),
        &["enumerate", "--n", "6", "--use-genfun", "--max-r", "5", "--format", "json"],
    ));
    assert_eq!(genfun["source"], "genfun");
    assert_eq!(brute["counts"], genfun["counts"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // resource guards
    assert_eq!(run(dir.path(), &["enumerate", "--n", "10"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["genfun", "--max-r", "7"]).status.code(), Some(3));
    assert_eq!(run(dir.path(), &["irreducible", "--n", "13"]).status.code(), Some(3));
    // usage errors
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["enumerate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["enumerate", "--n", "2", "--workers", "0"]).status.code(), Some(2));
    assert_eq!(
        run(dir.path(), &["render", "--alpha", "(1,3)(2,4)", "--beta", ""]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["irreducible", "--emit-pairs", "x.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["render", "--alpha", "(1,2)", "--beta", "(1,5)", "--n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn genfun_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), &["genfun", "--max-r", "1", "--format", "json"]));
    assert_eq!(v["polys"][0]["r"], 1);
    assert_eq!(v["polys"][0]["coeffs"], serde_json::json!([2]));
    assert_eq!(v["asympt"]["1"]["c"], "2");

    let v = json(&run(dir.path(), &["genfun", "--max-r", "0", "--format", "json"]));
    assert_eq!(v["polys"], serde_json::json!([]));
    assert_eq!(v["f_series"][0]["coeffs"], serde_json::json!([1, 2, 5, 14]));

    let v = json(&run(dir.path(), &["genfun", "--max-r", "3", "--format", "json"]));
    assert_eq!(v["polys"][1]["coeffs"], serde_json::json!([8, 4, -12, 4]));
    assert_eq!(
        v["polys"][2]["coeffs"],
        serde_json::json!([42, 52, -146, 8, 134, -92, 18])
    );
    assert!(v["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));

    let text = stdout(&run(dir.path(), &["genfun", "--max-r", "2"]));
    assert!(text.contains("P~_2(w) = 4w^3 - 12w^2 + 4w + 8"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn worker_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let one = run(a.path(), &["genfun", "--max-r", "4", "--workers", "1", "--format", "csv"]);
    let three = run(b.path(), &["genfun", "--max-r", "4", "--workers", "3", "--format", "csv"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    let p4 = "poly,4,9,112\n";
    assert!(stdout(&one).contains(p4));
    let cached = run(a.path(), &["genfun", "--max-r", "4", "--format", "csv"]);
    assert_eq!(cached.stdout, one.stdout);
}

#[test]
fn asymptotic_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["asympt", "--max-r", "3", "--format", "csv"]);
    let text = stdout(&o);
    let cs: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(cs, ["2", "2", "4/3"]);
    let v = json(&run(dir.path(), &["asympt", "--r", "2", "--format", "json"]));
    assert_eq!(v[0]["r"], 2);
    assert_eq!(v[0]["c"], "2");
}

#[test]
fn irreducible_counts_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["irreducible", "--n", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,r,a,b,count\n3,2,0,2,1\n3,2,1,1,6\n3,2,2,0,1\n");

    let pairs = dir.path().join("pairs.txt");
    let o = run(
        dir.path(),
        &["irreducible", "--n", "2", "--emit-pairs", pairs.to_str().unwrap()],
    );
    assert!(o.status.success());
    let text = fs::read_to_string(&pairs).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for l in &lines {
        let f: Vec<&str> = l.split(';').collect();
        assert_eq!(f.len(), 3);
        assert_eq!(f[0], "2");
    }
    assert!(stdout(&o).contains("total 2"));

    // r = 2 systems over all n: 1 + 6 + 1 at n = 3, 2 + 2 at n = 4
    let v = json(&run(dir.path(), &["irreducible", "--max-r", "2", "--format", "json"]));
    let r2: u64 = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["r"] == 2)
        .map(|e| e["count"].as_u64().unwrap())
        .sum();
    assert_eq!(r2, 12);
}

#[test]
fn render_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let o = run(
        dir.path(),
        &["render", "--alpha", "(2,3)", "--beta", "(1,2)", "--n", "3", "--output", out.to_str().unwrap()],
    );
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let svg = fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("1 loop</title>"));

    let again = run(dir.path(), &["render", "--alpha", "(2,3)", "--beta", "(1,2)", "--n", "3"]);
    assert_eq!(stdout(&again), svg);

    let two = stdout(&run(dir.path(), &["render", "--alpha", "", "--beta", "", "--n", "2"]));
    assert!(two.contains("2 loops</title>"));
    let one = stdout(&run(dir.path(), &["render", "--alpha", "(12)", "--beta", "()"]));
    assert!(one.contains("1 loop</title>"));
    assert_eq!(one.matches("<path").count(), 4);
}

#[test]
fn verify_passes_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");

    // a truncated cache file is reported, not silently used
    let victim = dir.path().join("irreducible_v1_n05_r03.csv");
    let body = fs::read_to_string(&victim).unwrap();
    fs::write(&victim, &body[..body.len() / 2]).unwrap();
    let o = run(dir.path(), &["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.contains("FAIL irreducible cache"), "{text}");
    assert!(text.contains("irreducible_v1_n05_r03.csv"), "{text}");

    // a missing file is recomputed
    fs::remove_file(&victim).unwrap();
    let o = run(dir.path(), &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(victim.exists());
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("MEANDER_CACHE_DIR", dir.path())
        .args(["genfun", "--max-r", "2"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("irreducible_v1_n04_r02.csv").exists());
}
