use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mcpo"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"))
}

#[test]
fn solve_then_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = bin()
        .args(["solve", "--scenario"])
        .arg(scenario("simple_rectangle"))
        .args(["--algo", "greedy", "--strategy", "best-fit", "--rotation", "none", "--no-flip", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["report.json", "report.csv", "report.txt", "overlay.svg", "nesting.svg"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("simple_rectangle,greedy,2,17,100.00,"));

    let svg = dir.path().join("again.svg");
    let status = bin()
        .args(["render", "--report"])
        .arg(out.join("report.json"))
        .args(["--view", "overlay", "--out"])
        .arg(&svg)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read(&svg).unwrap(), fs::read(out.join("overlay.svg")).unwrap());
}

#[test]
fn seeded_solves_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let status = bin()
            .args(["solve", "--scenario"])
            .arg(scenario("single_wall"))
            .args(["--algo", "ga", "--seed", "12", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let csv = fs::read_to_string(out.join("report.csv")).unwrap();
        rows.push(csv.lines().nth(1).unwrap().rsplit_once(',').unwrap().0.to_string());
        assert_eq!(
            fs::read(out.join("nesting.svg")).unwrap(),
            fs::read(dir.path().join("run0/nesting.svg")).unwrap()
        );
    }
    assert_eq!(rows[0], rows[1]);
    assert!(rows[0].starts_with("single_wall,ga,"));
}

#[test]
fn bench_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let scenarios = dir.path().join("s");
    fs::create_dir(&scenarios).unwrap();
    fs::copy(scenario("simple_rectangle"), scenarios.join("a.toml")).unwrap();
    fs::copy(scenario("simple_roof"), scenarios.join("b.toml")).unwrap();
    let csv = dir.path().join("bench.csv");
    let status = bin()
        .args(["bench", "--scenarios"])
        .arg(&scenarios)
        .args(["--seeds", "1,2", "--algos", "greedy,mc", "--out"])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&csv).unwrap();
    // Header, then per scenario one greedy row and two seeded MC rows.
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    assert!(text.contains("simple_roof,mc,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = fs::read_to_string(scenario("simple_rectangle")).unwrap();
    fs::write(&bad, text.replace("[[0.0, 0.0], [300.0, 0.0], [300.0, 300.0], [0.0, 300.0]]", "[[0.0, 0.0], [300.0, 0.0]]"))
        .unwrap();
    let out = bin()
        .args(["solve", "--scenario"])
        .arg(&bad)
        .args(["--algo", "greedy", "--out"])
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("region 0 ('container') outer ring"));

    let missing = bin()
        .args(["solve", "--scenario"])
        .arg(dir.path().join("nope.toml"))
        .args(["--algo", "greedy", "--out"])
        .arg(dir.path().join("o"))
        .status()
        .unwrap();
    assert_eq!(missing.code(), Some(4));

    let usage = bin().args(["solve", "--algo", "annealing"]).status().unwrap();
    assert_eq!(usage.code(), Some(2));
}
