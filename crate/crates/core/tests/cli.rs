use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_af-tail");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("AF_TAIL_MAX_ENTRIES").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_builtin() {
    let out = run(&["validate", "car"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "VALID\n");
}

#[test]
fn counts_and_dims() {
    let out = run(&["counts", "pascal", "--level", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "(3,0) 1\n(3,1) 3\n(3,2) 3\n(3,3) 1\n");

    let out = run(&["dims", "fibonacci", "--max-level", "3"]);
    let last = stdout(&out).lines().last().unwrap().to_string();
    assert_eq!(last, "level 3 blocks 3 2 dim 13");
}

#[test]
fn embed_matrix_matches_incidence() {
    let out = run(&["embed-matrix", "fibonacci", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 1\n1 0\n");
    assert_eq!(stdout(&run(&["embed-matrix", "uhf3", "--level", "2"])), "3\n");
}

#[test]
fn suite_filter() {
    let out = run(&["verify", "pascal", "--depth", "3", "--samples", "2", "--suite", "expectation"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let suites: Vec<&str> = text.lines().filter(|l| l.starts_with("SUITE")).collect();
    assert_eq!(suites.len(), 1);
    assert!(suites[0].starts_with("SUITE expectation PASS checks="));
    assert!(text.starts_with("CONFIG source=pascal depth=3 seed=7 samples=2 rng=chacha8\n"));
}

#[test]
fn file_source_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("car.txt");
    std::fs::write(&good, "BRATTELI 1\nlevels 3\nvertices 1 1 1 1\nincidence 0\n2\nincidence 1\n2\nincidence 2\n2\n")
        .unwrap();
    let out = run(&["verify", good.to_str().unwrap(), "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "BRATTELI 1\nlevels 2\nvertices 1 2 1\nincidence 0\n1 1\nincidence 1\n1\n").unwrap();
    for cmd in ["validate", "verify"] {
        let out = run(&[cmd, bad.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains("line 8"));
    }
    assert_eq!(run(&["validate", dir.path().join("missing").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["verify", "car", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "car", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["counts", "car", "--level", "9"]).status.code(), Some(2));
    assert_eq!(run(&["counts", "car"]).status.code(), Some(2));
}

#[test]
fn size_cap_from_environment() {
    let out = Command::new(BIN)
        .args(["verify", "uhf3", "--samples", "2"])
        .env("AF_TAIL_MAX_ENTRIES", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("resource=table of"), "{text}");
    assert!(text.ends_with("RESULT FAIL\n"));

    let out = Command::new(BIN).args(["validate", "car"]).env("AF_TAIL_MAX_ENTRIES", "lots").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
