use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qqg(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qqg")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.toml");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const TWO_CELLS: &str = r#"
objective = "sphere"
dim = 3
seed = 4
max_iters = 200

[starts]
count = 3

[[cells]]
algorithm = "bfgs"
transform = "vanilla"

[[cells]]
algorithm = "adam"
transform = "qqg"
"#;

fn files_under(dir: &Path) -> Vec<String> {
    let mut out: Vec<String> = fs::read_dir(dir.join("traces"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    out.sort();
    out
}

#[test]
fn list_names_everything() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qqg(&["list"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["rosenbrock", "monkey_saddle", "logistic", "adagrad", "qqg"] {
        assert!(text.contains(name), "missing {name} in\n{text}");
    }
}

#[test]
fn run_writes_one_trace_per_cell_and_start() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), TWO_CELLS);
    let out = qqg(&["run", &cfg, "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("o");
    let traces = files_under(&dir);
    assert_eq!(traces.len(), 6);
    assert!(traces.contains(&"sphere__qqg-adam__start02.csv".to_string()));
    let summary = fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(summary.starts_with("objective,cell,algorithm,transform,"));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), TWO_CELLS);
    for out in ["a", "b"] {
        assert!(qqg(&["run", &cfg, "--out", out, "--seed", "11"], tmp.path()).status.success());
    }
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(fs::read(a.join("summary.csv")).unwrap(), fs::read(b.join("summary.csv")).unwrap());
    for f in files_under(&a) {
        assert_eq!(fs::read(a.join("traces").join(&f)).unwrap(), fs::read(b.join("traces").join(&f)).unwrap(), "{f}");
    }
}

#[test]
fn config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let bad_alg = write_config(tmp.path(), &TWO_CELLS.replace("\"bfgs\"", "\"lbfgs\""));
    let out = qqg(&["run", &bad_alg], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));

    let broken = write_config(tmp.path(), "objective = \n");
    assert_eq!(qqg(&["run", &broken], tmp.path()).status.code(), Some(1));
    assert_eq!(qqg(&["run", "does-not-exist.toml"], tmp.path()).status.code(), Some(1));
    assert_eq!(qqg(&["frobnicate"], tmp.path()).status.code(), Some(1));
}

#[test]
fn divergence_exits_two_but_still_writes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"
objective = "monkey_saddle"
max_iters = 200

[starts]
points = [[-1.0, 0.0]]

[[cells]]
algorithm = "gd"
transform = "vanilla"
lr = 0.5
"#,
    );
    let out = qqg(&["run", &cfg, "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let summary = fs::read_to_string(tmp.path().join("o/summary.csv")).unwrap();
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[7], "1", "diverged column: {summary}");
}

#[test]
fn check_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qqg(&["check", "--seed", "3"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bench_writes_the_full_suite() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qqg(&["bench", "--out", "b", "--max-iters", "30"], tmp.path());
    assert!(matches!(out.status.code(), Some(0 | 2)), "{}", String::from_utf8_lossy(&out.stderr));
    // 8 objectives × 6 cells × 3 starts
    assert_eq!(files_under(&tmp.path().join("b")).len(), 144);
    let summary = fs::read_to_string(tmp.path().join("b/summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 49);
}
