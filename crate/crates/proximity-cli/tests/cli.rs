//! End-to-end command-line behavior: subcommands, exit codes, emission
//! formats, and the enumeration guard.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proximity_core::fileio::write_problem;
use proximity_core::space::FiniteMetricSpace;
use proximity_core::Problem;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proximity"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn gallery(dir: &Path, name: &str, extra_args: &[&str]) -> PathBuf {
    let out = dir.join(format!("{name}.problem"));
    let out_str = out.to_str().unwrap().to_string();
    let mut args = vec!["gallery", name, "--out", &out_str];
    args.extend_from_slice(extra_args);
    let output = run(&args, dir);
    assert!(output.status.success(), "{}", stderr(&output));
    out
}

#[test]
fn gallery_files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let first = gallery(dir.path(), "ex22", &[]);
    let bytes_first = std::fs::read(&first).unwrap();
    std::fs::remove_file(&first).unwrap();
    let second = gallery(dir.path(), "ex22", &[]);
    let bytes_second = std::fs::read(&second).unwrap();
    assert_eq!(bytes_first, bytes_second);

    let circle_a = std::fs::read(gallery(dir.path(), "circle", &[])).unwrap();
    std::fs::remove_file(dir.path().join("circle.problem")).unwrap();
    let circle_b = std::fs::read(gallery(dir.path(), "circle", &[])).unwrap();
    assert_eq!(circle_a, circle_b);
}

#[test]
fn solve_step_map_instance_prints_the_result() {
    let dir = tempfile::tempdir().unwrap();
    let problem = gallery(dir.path(), "ex22", &[]);
    let output = run(
        &["solve", "--problem", problem.to_str().unwrap(), "--f", "f1"],
        dir.path(),
    );
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("result: (-1,5)"), "{text}");
    assert!(text.contains("coincidence-found"), "{text}");
}

#[test]
fn check_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // The step-map instance: weak domination holds, domination fails.
    let ex22 = gallery(dir.path(), "ex22", &[]);
    let output = run(&["check", "--problem", ex22.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(1), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("proximal-commuting"));
    assert!(text.contains("f-weakly-dominates"));
    assert!(text.contains("f-dominates"));

    // The circle: weak domination already fails.
    let circle = gallery(dir.path(), "circle", &[]);
    let output = run(&["check", "--problem", circle.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(1));

    // A fully certified instance: all three conditions hold.
    let quartering = quartering_lift_file(dir.path());
    let output = run(&["check", "--problem", quartering.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
}

fn quartering_lift_file(dir: &Path) -> PathBuf {
    let base: Vec<(&str, f64)> = vec![("0", 0.0), ("1", 1.0), ("4", 4.0), ("16", 16.0)];
    let phi = [("0", "0"), ("1", "0"), ("4", "1"), ("16", "4")];
    let psi = [("0", "0"), ("1", "1"), ("4", "4"), ("16", "16")];
    let problem = proximity_core::gallery::build_cartesian(&base, &phi, &psi).unwrap();
    let path = dir.join("quartering.problem");
    std::fs::write(&path, write_problem(&problem, None)).unwrap();
    path
}

#[test]
fn user_margin_checks_against_the_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let path = quartering_lift_file(dir.path());
    // Maximal margin is ln 3; 1.0 fits, 1.2 does not.
    let output = run(
        &["check", "--problem", path.to_str().unwrap(), "--tau", "1.0"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let output = run(
        &["check", "--problem", path.to_str().unwrap(), "--tau", "1.2"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    let output = run(
        &["check", "--problem", path.to_str().unwrap(), "--tau", "-0.5"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn structured_emission_is_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let ex22 = gallery(dir.path(), "ex22", &[]);
    let output = run(
        &["check", "--problem", ex22.to_str().unwrap(), "--emit", "structured"],
        dir.path(),
    );
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in &lines {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        for field in ["condition", "holds", "tau_max", "violation", "discretized"] {
            assert!(value.get(field).is_some(), "missing {field} in {line}");
        }
    }

    let output = run(
        &[
            "solve",
            "--problem",
            ex22.to_str().unwrap(),
            "--emit",
            "structured",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    assert_eq!(value["outcome"], "coincidence-found");
    assert_eq!(value["result"], "(-1,5)");
    assert!(value["hypotheses"]["all_hold"].as_bool().unwrap());
}

#[test]
fn oracle_exit_reflects_existence() {
    let dir = tempfile::tempdir().unwrap();
    let ex22 = gallery(dir.path(), "ex22", &[]);
    let output = run(&["oracle", "--problem", ex22.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("(-1,5)"));

    let reciprocal = gallery(dir.path(), "reciprocal-counterexample", &[]);
    let output = run(&["oracle", "--problem", reciprocal.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn malformed_files_exit_two_with_line_anchors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.problem");
    std::fs::write(&path, "points\n  a 0\n  b zero\nend\n").unwrap();
    let output = run(&["check", "--problem", path.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(2));
    let err = stderr(&output);
    assert!(err.contains("line 3"), "{err}");

    let output = run(&["check", "--problem", "does-not-exist.problem"], dir.path());
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["gallery", "unknown-instance"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_start_point_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let ex22 = gallery(dir.path(), "ex22", &[]);
    let output = run(
        &["solve", "--problem", ex22.to_str().unwrap(), "--x0", "nowhere"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn circle_parameters_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let path = gallery(dir.path(), "circle", &["--a", "2", "--b", "5", "--n", "12"]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("a11"), "12 inner samples expected");
    // Set distance b - a = 3 appears as a stored cross distance.
    assert!(text.lines().any(|l| l.trim().starts_with("b0 a0 3")), "{text}");
}

#[test]
fn enumeration_guard_refuses_oversized_instances() {
    let dir = tempfile::tempdir().unwrap();
    // 44 points, bipartite, all cross distances attain: the filtered
    // enumeration is (22 * 22^2)^2 > 10^8.
    let n = 44;
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let table: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    let space = FiniteMetricSpace::from_table(labels.clone(), table).unwrap();
    let s1: Vec<&str> = labels[..22].iter().map(String::as_str).collect();
    let s2: Vec<&str> = labels[22..].iter().map(String::as_str).collect();
    let maps: Vec<(&str, &str)> = (0..22).map(|i| (s1[i], s2[i])).collect();
    let problem = Problem::new(space, &s1, &s2, &maps, &maps, 0.0, 1e-9).unwrap();
    let path = dir.path().join("large.problem");
    std::fs::write(&path, write_problem(&problem, None)).unwrap();

    let output = run(&["check", "--problem", path.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("--force-large"));

    // The flag itself is accepted on a small instance.
    let ex22 = gallery(dir.path(), "ex22", &[]);
    let output = run(
        &["solve", "--problem", ex22.to_str().unwrap(), "--force-large"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn tolerance_overrides_are_revalidated() {
    let dir = tempfile::tempdir().unwrap();
    let ex22 = gallery(dir.path(), "ex22", &[]);
    // Merging tolerance: rejected at load time.
    let output = run(
        &[
            "check",
            "--problem",
            ex22.to_str().unwrap(),
            "--tol-eq",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("tolerance"), "{}", stderr(&output));
}
