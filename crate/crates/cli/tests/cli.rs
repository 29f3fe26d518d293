use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cyest(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyest"))
        .args(args)
        .current_dir(cwd)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

#[test]
fn verify_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = cyest(&["verify", "--out", "v"], dir.path());
    assert_eq!(code(&o), 0);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("v/verify.json")).unwrap()).unwrap();
    assert!(json["passed"].as_u64().unwrap() >= 17);
    assert_eq!(json["failed"], 0);
}

#[test]
fn mutated_verify_fails_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = cyest(&["verify", "--out", "v", "--mutate", "AX-216-signflip"], dir.path());
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing, vec!["FAIL ID-DOLORE1"]);
}

#[test]
fn config_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "foo=1\n").unwrap();
    assert_eq!(code(&cyest(&["verify", "--config", "bad.cfg"], dir.path())), 64);
    assert_eq!(code(&cyest(&["check", "--dim", "3"], dir.path())), 64);
    assert_eq!(code(&cyest(&["check", "--family", "spiral"], dir.path())), 64);
    assert_eq!(code(&cyest(&["check", "--config", "missing.cfg"], dir.path())), 64);
    assert_eq!(code(&cyest(&["solve", "--amplitude", "0.1,0.2"], dir.path())), 64);
    assert_eq!(code(&cyest(&["frobnicate"], dir.path())), 64);
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "dim=1\nn=32\nseed=5\n").unwrap();
    let o = cyest(&["check", "--config", "run.cfg", "--n", "8"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("dim=1\n") && text.contains("n=8\n") && text.contains("seed=5\n"));
}

#[test]
fn flat_solve_reports_ratio_two_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "--dim", "2", "--n", "8", "--family", "zero", "--amplitude", "0"];
    let o = cyest(&[&args[..], &["--out", "a"]].concat(), dir.path());
    assert_eq!(code(&o), 0);
    let o = cyest(&[&args[..], &["--out", "b"]].concat(), dir.path());
    assert_eq!(code(&o), 0);
    for f in ["solve.csv", "solve.json", "phi.snap"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let rows = lab::report::from_csv(&std::fs::read_to_string(dir.path().join("a/solve.csv")).unwrap()).unwrap();
    assert_eq!(rows[0].ratio, 2.0);
}

#[test]
fn non_convergence_exits_3_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "max_newton=1\n").unwrap();
    let o = cyest(
        &["solve", "--config", "run.cfg", "--dim", "2", "--n", "8", "--family", "random-band", "--amplitude", "0.5"],
        dir.path(),
    );
    assert_eq!(code(&o), 3);
    let rows = lab::report::from_csv(&std::fs::read_to_string(dir.path().join("out/solve.csv")).unwrap()).unwrap();
    assert!(rows[0].flagged);
    assert!(dir.path().join("out/phi.snap").exists());
}

#[test]
fn sweep_writes_one_row_per_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--dim", "1", "--n", "32", "--amplitude", "0,0.5"];
    assert_eq!(code(&cyest(&[&args[..], &["--out", "a"]].concat(), dir.path())), 0);
    assert_eq!(code(&cyest(&[&args[..], &["--out", "b"]].concat(), dir.path())), 0);
    let a = std::fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    assert_eq!(a, std::fs::read_to_string(dir.path().join("b/sweep.csv")).unwrap());
    assert_eq!(lab::report::from_csv(&a).unwrap().len(), 2);

    let o = cyest(&["report", "a"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("== sweep.csv: 2 runs, 0 flagged\n"));
}

#[test]
fn report_matches_the_golden_summary() {
    let o = cyest(&["report", "report"], &fixtures());
    assert_eq!(code(&o), 0);
    let golden = std::fs::read_to_string(fixtures().join("report.golden")).unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), golden);
}

#[test]
fn report_without_inputs_exits_66() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("empty")).unwrap();
    assert_eq!(code(&cyest(&["report", "empty"], dir.path())), 66);
    assert_eq!(code(&cyest(&["report", "nowhere"], dir.path())), 66);
}
