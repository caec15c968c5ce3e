use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn sqfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqfa")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_parity_embedding() {
    let o = sqfa(&["run", path_str(&fixture("parity_mo.json")), "--input", "aa"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1.00000000000\n");
    let o = sqfa(&["run", path_str(&fixture("parity_mo.json")), "--input", "a"]);
    assert_eq!(stdout(&o), "0.00000000000\n");
}

#[test]
fn run_rejects_unknown_symbol() {
    let o = sqfa(&["run", path_str(&fixture("parity_mo.json")), "--input", "ab"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--input"));
}

#[test]
fn bound_dim_lower_example() {
    let o = sqfa(&["bound", "dim-lower", "--dfa-states", "2", "--delta", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.5400\n");
}

#[test]
fn validate_exit_codes() {
    let o = sqfa(&["validate", path_str(&fixture("bad_trace.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("check_density"));
    assert!(stdout(&o).contains("residual"));
    assert_eq!(sqfa(&["validate", path_str(&fixture("hadamard_cl.json"))]).status.code(), Some(0));
    let missing = sqfa(&["validate", "/nonexistent/model.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "{\"model\": \"dfa\", \"alphabet\": 3}").unwrap();
    let o = sqfa(&["validate", path_str(&garbage)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("alphabet"), "{}", stderr(&o));
}

#[test]
fn convert_then_run_agrees() {
    let out = scratch("hadamard_mo.json");
    let o = sqfa(&["convert", path_str(&fixture("hadamard_cl.json")), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("out_dim: 6"));
    let o = sqfa(&["run", path_str(&out), "--input", "a"]);
    assert_eq!(stdout(&o), "0.500000000000\n");
}

#[test]
fn isolation_reports_inconsistency() {
    let o = sqfa(&[
        "isolation",
        path_str(&fixture("hadamard_cl.json")),
        "--dfa",
        path_str(&fixture("parity_dfa.json")),
        "--cutpoint",
        "0.5",
        "--max-len",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("consistent: false"));
}

#[test]
fn separation_on_parity() {
    let o = sqfa(&[
        "separation",
        path_str(&fixture("parity_mo.json")),
        "--dfa",
        path_str(&fixture("parity_dfa.json")),
        "--delta",
        "0.5",
        "--max-len",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("threshold: 0.70711"));
    assert!(text.contains("min_cross_distance: 1.41421"));
}

#[test]
fn minimize_and_gen_are_deterministic() {
    let a = scratch("min_a.json");
    let b = scratch("min_b.json");
    for p in [&a, &b] {
        let o = sqfa(&["minimize", path_str(&fixture("mod3_dfa.json")), "-o", path_str(p)]);
        assert_eq!(stdout(&o), "states: 4 -> 3\n");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let g1 = scratch("gen_1.json");
    let g2 = scratch("gen_2.json");
    for p in [&g1, &g2] {
        let o = sqfa(&["gen", "--kind", "1qcfa", "--seed", "5", "-o", path_str(p)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&g1).unwrap(), std::fs::read(&g2).unwrap());
}

#[test]
fn equiv_flags_and_caps() {
    let o = sqfa(&["equiv", "--kind", "1qfac", "--trials", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("failures: 0"));
    let o = sqfa(&["equiv", "--kind", "1qfac", "--trials", "5", "--seed", "3", "--max-q", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("max_q"));
}
