//! End-to-end tests of the binary: exit codes, diagnostic formatting,
//! output determinism, and the plan-file round trip.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polsqueeze"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process exits normally")
}

/// Per-test scratch directory; the tag keeps parallel tests apart.
fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polsqueeze_cli_{tag}_{}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir is creatable");
    dir
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
        .to_str()
        .expect("golden path is utf-8")
        .to_string()
}

/// The diagnostic contract: one line on stderr, prefixed `error:`.
fn assert_single_error_line(output: &Output) {
    let stderr = stderr_text(output);
    assert_eq!(stderr.lines().count(), 1, "stderr: {stderr:?}");
    assert!(stderr.starts_with("error: "), "stderr: {stderr:?}");
}

/// Parses the value of a `key = value` report line.
fn value_of(report: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    report
        .lines()
        .find_map(|line| line.trim_start().strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("line {key:?} in report:\n{report}"))
        .trim()
        .parse()
        .expect("report value parses as f64")
}

#[test]
fn propagate_identity_at_zero_length() {
    let output = run(&["propagate", "--k1", "0", "--k2", "0", "--zeta", "0"]);
    assert_eq!(exit_code(&output), 0);
    let report = stdout_text(&output);
    assert_eq!(value_of(&report, "symplectic residual"), 0.0);
    let ones = report.matches("+1.0000000000000000e0").count();
    let zeros = report.matches("+0.0000000000000000e0").count();
    assert_eq!((ones, zeros), (3, 6), "report:\n{report}");
}

#[test]
fn propagate_keeps_symplectic_residual_small() {
    let output = run(&["propagate", "--k1", "0.2", "--k2", "0.5", "--zeta", "1.0"]);
    assert_eq!(exit_code(&output), 0);
    let residual = value_of(&stdout_text(&output), "symplectic residual");
    assert!(residual <= 1e-14, "residual {residual}");
}

#[test]
fn usage_errors_exit_two_with_single_diagnostic() {
    let cases: [&[&str]; 6] = [
        &["frobnicate"],
        &["propagate", "--k1", "0", "--k2", "0"],
        &["propagate", "--k1", "bogus", "--k2", "0", "--zeta", "0"],
        &["propagate", "--k1", "0", "--k2", "0", "--zeta", "0", "--k3", "1"],
        &[
            "sweep", "--plan", "plan.txt", "--k1", "0.1", "--k2", "0.2", "--mag-sq-1o", "1",
            "--mag-sq-1e", "1", "--zeta-start", "0", "--zeta-end", "1", "--zeta-steps", "2",
        ],
        &[
            "sweep", "--k1", "0.1", "--k2", "0.2", "--mag-sq-1o", "1", "--mag-sq-1e", "1",
            "--zeta-start", "0", "--zeta-end", "1", "--zeta-steps", "2", "--outputs", "bogus",
        ],
    ];
    for args in cases {
        let output = run(args);
        assert_eq!(exit_code(&output), 2, "args: {args:?}");
        assert_single_error_line(&output);
        assert!(output.stdout.is_empty(), "args: {args:?}");
    }
}

#[test]
fn domain_errors_exit_one_with_single_diagnostic() {
    let cases: [&[&str]; 3] = [
        &["propagate", "--k1", "-0.5", "--k2", "0", "--zeta", "0"],
        &["moments", "--k1", "0.2", "--k2", "0.5", "--zeta", "0.3", "--n1o", "0", "--n1e", "0"],
        &["sweep", "--plan", "/nonexistent/plan.txt"],
    ];
    for args in cases {
        let output = run(args);
        assert_eq!(exit_code(&output), 1, "args: {args:?}");
        assert_single_error_line(&output);
    }
}

#[test]
fn qpm_rejects_even_order_as_domain_error() {
    let table = golden("dispersion_ratio9.txt");
    let output = run(&["qpm", "--table", &table, "--wavelength", "1.2", "--order2", "2"]);
    assert_eq!(exit_code(&output), 1);
    assert_single_error_line(&output);
    assert!(stderr_text(&output).contains("must be odd"));
}

#[test]
fn qpm_single_grating_report_on_ratio9_table() {
    let table = golden("dispersion_ratio9.txt");
    let output = run(&["qpm", "--table", &table, "--wavelength", "1.2"]);
    assert_eq!(exit_code(&output), 0);
    let report = stdout_text(&output);
    assert!(report.contains("passed = true"), "report:\n{report}");
    assert!(report.contains("order = -9"), "report:\n{report}");
    assert!(report.contains("no poling required = false"), "report:\n{report}");
    assert_eq!(value_of(&report, "k2"), 1.0);
}

#[test]
fn qpm_cites_offending_table_line() {
    let dir = scratch_dir("bad_table");
    let path = dir.join("table.txt");
    fs::write(&path, "0.3 2.6 2.2\n0.6 2.2\n1.2 2.0 2.1\n").expect("table is writable");
    let output = run(&["qpm", "--table", path.to_str().unwrap(), "--wavelength", "1.0"]);
    assert_eq!(exit_code(&output), 1);
    assert_single_error_line(&output);
    assert!(stderr_text(&output).contains("dispersion table line 2"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_plan_errors_cite_offending_line() {
    let dir = scratch_dir("bad_plan");
    let path = dir.join("plan.txt");
    fs::write(&path, "k1 = 0.2\nk2 = 0.5\nwavelength = 1\n").expect("plan is writable");
    let output = run(&["sweep", "--plan", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1);
    assert_single_error_line(&output);
    assert!(stderr_text(&output).contains("sweep plan line 3"));
    fs::remove_dir_all(&dir).ok();
}

const INLINE_SWEEP: [&str; 18] = [
    "sweep", "--k1", "0.2", "--k2", "0.5", "--mag-sq-1o", "1", "--mag-sq-1e", "1",
    "--phase-sum", "pi", "--zeta-start", "0", "--zeta-end", "2", "--zeta-steps", "9",
    "--format",
];

#[test]
fn sweep_csv_runs_are_byte_identical() {
    let mut args = INLINE_SWEEP.to_vec();
    args.push("csv");
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_text(&first);
    assert_eq!(text.lines().next(), Some("zeta,N1o,N1e,N3e,V0,V1,V2,V3,S0,S1,S2,S3"));
    assert_eq!(text.lines().count(), 10);
    assert!(text.ends_with('\n'));
}

#[test]
fn sweep_plan_file_matches_inline_flags() {
    let dir = scratch_dir("plan_round_trip");
    let path = dir.join("plan.txt");
    fs::write(
        &path,
        "# inline-flag twin\nk1 = 0.2\nk2 = 0.5\nmag_sq_1o = 1\nmag_sq_1e = 1\n\
         phase_sum = pi\nzeta_start = 0\nzeta_end = 2\nzeta_steps = 9\n",
    )
    .expect("plan is writable");
    let from_plan = run(&["sweep", "--plan", path.to_str().unwrap(), "--format", "csv"]);
    let mut args = INLINE_SWEEP.to_vec();
    args.push("csv");
    let from_flags = run(&args);
    assert_eq!(exit_code(&from_plan), 0);
    assert_eq!(from_plan.stdout, from_flags.stdout);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_output_flag_writes_file_and_leaves_stdout_empty() {
    let dir = scratch_dir("output_file");
    let path = dir.join("rows.csv");
    let mut args = INLINE_SWEEP.to_vec();
    args.push("csv");
    let direct = run(&args);
    args.extend(["--output", path.to_str().unwrap()]);
    let to_file = run(&args);
    assert_eq!(exit_code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    let written = fs::read(&path).expect("output file exists");
    assert_eq!(written, direct.stdout);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_csv_requires_means_and_stokes_groups() {
    let output = run(&[
        "sweep", "--k1", "0.2", "--k2", "0.5", "--mag-sq-1o", "1", "--mag-sq-1e", "1",
        "--zeta-start", "0", "--zeta-end", "1", "--zeta-steps", "2",
        "--outputs", "photon_variances", "--format", "csv",
    ]);
    assert_eq!(exit_code(&output), 1);
    assert_single_error_line(&output);
    assert!(stderr_text(&output).contains("csv output requires"));
}

#[test]
fn sweep_table_columns_follow_selection() {
    let output = run(&[
        "sweep", "--k1", "0.2", "--k2", "0.5", "--mag-sq-1o", "1", "--mag-sq-1e", "1",
        "--zeta-start", "0", "--zeta-end", "1", "--zeta-steps", "3",
        "--outputs", "photon_means",
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_text(&output);
    let header = text.lines().next().expect("header line");
    let names: Vec<&str> = header.split_whitespace().collect();
    assert_eq!(names, ["zeta", "N1o", "N1e", "N3e"]);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn moments_at_zero_length_report_poissonian_input() {
    let output = run(&[
        "moments", "--k1", "0.3", "--k2", "0.7", "--zeta", "0",
        "--n1o", "2", "--n1e", "0.5", "--phase-sum", "-pi", "--phase-diff", "0.4",
    ]);
    assert_eq!(exit_code(&output), 0);
    let report = stdout_text(&output);
    assert!((value_of(&report, "N1o") - 2.0).abs() <= 1e-12);
    assert!((value_of(&report, "N1e") - 0.5).abs() <= 1e-12);
    assert!(value_of(&report, "N3e").abs() <= 1e-12);
    for line in report.lines().filter(|l| l.starts_with('S')) {
        let normalized: f64 = line
            .rsplit("normalized = ")
            .next()
            .expect("normalized field")
            .parse()
            .expect("normalized parses");
        assert!((normalized - 1.0).abs() <= 1e-12, "line: {line}");
    }
}

#[test]
fn verify_small_grid_passes() {
    let output = run(&[
        "verify", "--grid", "3", "--oracle-steps", "400", "--samples", "30",
    ]);
    assert_eq!(exit_code(&output), 0);
    let report = stdout_text(&output);
    assert!(report.contains("verify: 8 of 8 checks passed"), "report:\n{report}");
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["sweep", "--help"][..]] {
        let output = run(args);
        assert_eq!(exit_code(&output), 0, "args: {args:?}");
        assert!(!output.stdout.is_empty());
        assert!(output.stderr.is_empty());
    }
}
