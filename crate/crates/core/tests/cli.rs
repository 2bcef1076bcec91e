use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sigatoms"))
}

fn write_input(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sigatoms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const TWO_SETS: &str = "universe a b c\nset A = {a, b}\nset B = {b, c}\n";

#[test]
fn kappa_closure_of_two_overlapping_sets() {
    let f = write_input("two.setsys", TWO_SETS);
    let (code, out, _) = run(&["closure", "--class", "kappa", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let closed = sigatoms::parse_set_system(&out).unwrap();
    let expected: Vec<u64> = vec![0, 0b010, 0b011, 0b110, 0b111];
    assert_eq!(closed.masks(), expected.as_slice());
}

#[test]
fn closure_output_is_idempotent() {
    let f = write_input("idem.setsys", TWO_SETS);
    for class in ["kappa", "sigma", "lambda", "union-f", "inter-f", "disjunion-f", "sigma-delta", "monotone"] {
        let (code, once, _) = run(&["closure", "--class", class, f.to_str().unwrap()]);
        assert_eq!(code, 0, "{class}");
        let g = write_input(&format!("idem-{class}.setsys"), &once);
        let (_, twice, _) = run(&["closure", "--class", class, g.to_str().unwrap()]);
        let a = sigatoms::parse_set_system(&once).unwrap();
        let b = sigatoms::parse_set_system(&twice).unwrap();
        assert_eq!(a, b, "{class}");
    }
}

#[test]
fn theorem_target_not_applicable_exits_zero() {
    let f = write_input("na.setsys", TWO_SETS);
    let (code, out, _) = run(&["verify", "--target", "theorem31", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("theorem31: NOT_APPLICABLE"), "{out}");
}

#[test]
fn failing_check_exits_one() {
    // Under the empty-meet convention the empty family's generator atoms are ∅.
    let f = write_input("empty.setsys", "universe a b\n");
    let args = ["verify", "--target", "theorem31", "--policy", "empty", f.to_str().unwrap()];
    let (code, out, _) = run(&args);
    assert_eq!(code, 1);
    assert!(out.contains("theorem31: FAIL"), "{out}");
    let (code, _, _) = run(&["verify", "--target", "theorem31", f.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn exhaustive_scan_n3() {
    let (code, out, _) = run(&["--format", "structured", "scan", "--n", "3", "--exhaustive"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["counters"]["families_total"], 256);
    assert_eq!(v["results"]["tallies"]["theorem31"]["fail"], 0);
    assert_eq!(v["subcommand"], "scan");
}

#[test]
fn input_errors_name_file_and_line() {
    let f = write_input("bad.setsys", "universe a b\nset A = {a, z}\n");
    let (code, out, err) = run(&["atoms", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("bad.setsys") && err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let f = write_input("usage.setsys", TWO_SETS);
    let p = f.to_str().unwrap();
    assert_eq!(run(&["closure", "--class", "sigma", "--nullary", "exclude", p]).0, 2);
    assert_eq!(run(&["closure", "--class", "bogus", p]).0, 2);
    assert_eq!(run(&["scan", "--n", "3"]).0, 2);
    assert_eq!(run(&["scan", "--n", "3", "--exhaustive", "--count", "5"]).0, 2);
    assert_eq!(run(&["scan", "--n", "5", "--exhaustive"]).0, 2);
    assert_eq!(run(&["scan", "--n", "3", "--count", "5", "--jobs", "0"]).0, 2);
    assert_eq!(run(&["atoms", "/nonexistent/x.setsys"]).0, 2);
    assert_eq!(run(&[]).0, 2);
}

#[test]
fn compare_rejects_different_universes() {
    let f = write_input("u3.setsys", TWO_SETS);
    let g = write_input("u2.setsys", "universe a b\nset A = {a}\n");
    let (code, _, err) = run(&["compare", f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("different universes"), "{err}");
}

#[test]
fn compare_reports_relation() {
    let f = write_input("c1.setsys", "universe a b c\nset A = {a, b}\n");
    let g = write_input("c2.setsys", "universe a b c\nset A = {a}\nset B = {b}\n");
    let (code, out, _) = run(&["--format", "structured", "compare", f.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["relation"], "proper_subset");
    assert_eq!(v["results"]["by_enumeration"], "proper_subset");
}

#[test]
fn structured_output_is_stable_across_jobs() {
    let base = ["--format", "structured", "scan", "--n", "5", "--count", "400", "--seed", "11", "--target", "all"];
    let (c1, one, _) = run(&[&base[..], &["--jobs", "1"]].concat());
    let (c4, four, _) = run(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(c1, c4);
    assert_eq!(one, four);
}
