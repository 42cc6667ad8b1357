//! End-to-end checks of the command-line interface: config round trips, exit
//! codes, mesh output shape and the ODE CSV workflow.

use std::path::Path;
use std::process::{Command, Output};

fn meridian(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meridian"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const RULED: &str = "\
profile = linear-f
slope = 1
intercept = 1
curve = circle
kappa0 = 1.0
u-min = 0.0
u-max = 2.0
v-min = 0.0
v-max = 3.0
grid = 10x10
";

#[test]
fn classify_ruled_exits_zero_with_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(&["classify", "--config", &cfg], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("verdict = SecondKind-I"), "{stdout}");
    assert!(stdout.contains("lambda_samples = 100"), "{stdout}");
}

#[test]
fn classify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let report = dir.path().join("report.txt");
    let out = meridian(
        &[
            "classify",
            "--config",
            &cfg,
            "--out",
            report.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("verdict = SecondKind-I"));
    assert!(text.contains("c_frame = "));
}

#[test]
fn classify_rejected_surface_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // ruled over a non-circular directrix: not pointwise 1-type
    let cfg = write_config(
        dir.path(),
        "probe.cfg",
        &RULED.replace(
            "curve = circle\nkappa0 = 1.0",
            "curve = table\nkappa-table = 0:1.0, 1.5:1.4, 3:1.0",
        ),
    );
    let out = meridian(&["classify", "--config", &cfg], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(2), "{stdout}");
    assert!(stdout.contains("verdict = NotPointwise1Type"), "{stdout}");
}

#[test]
fn classify_bad_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", "profile = nonsense\n");
    let out = meridian(&["classify", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn classify_grid_override_changes_sample_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(
        &["classify", "--config", &cfg, "--grid", "12x8"],
        dir.path(),
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("lambda_samples = 96"), "{stdout}");
}

#[test]
fn verify_both_modes_agree_on_smooth_surface() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(&["verify", "--config", &cfg, "--mode", "both"], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("max_discrepancy"), "{stdout}");
}

#[test]
fn verify_rejects_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(&["verify", "--config", &cfg, "--grid", "4x4"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_single_mode_prints_components() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(
        &["verify", "--config", &cfg, "--mode", "closed"],
        dir.path(),
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    // one line per grid point, 8 columns: u v and the six bivector components
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 100);
    assert_eq!(lines[0].split_whitespace().count(), 8);
}

#[test]
fn solve_ode_csv_feeds_classify_with_same_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let out = meridian(
        &[
            "solve-ode",
            "--kind",
            "first",
            "--f0",
            "1.0",
            "--df0",
            "0.3",
            "--d2f0",
            "0.2",
            "--span",
            "0:0.8",
            "--out",
            csv.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("u,f,df,d2f\n"));
    assert_eq!(text.lines().count(), 2002); // header + 2001 samples

    let cfg = write_config(
        dir.path(),
        "ode.cfg",
        "\
profile = from-ode-csv
path = profile.csv
curve = circle
kappa0 = 0.0
u-min = 0.0
u-max = 0.8
v-min = 0.0
v-max = 1.5
grid = 10x10
",
    );
    let out = meridian(&["classify", "--config", &cfg], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("verdict = FirstKind-II-i"), "{stdout}");
}

#[test]
fn solve_ode_second_kind_rejects_zero_curvature_start() {
    let dir = tempfile::tempdir().unwrap();
    let out = meridian(
        &[
            "solve-ode",
            "--kind",
            "second",
            "--f0",
            "1.0",
            "--df0",
            "0.3",
            "--d2f0",
            "0",
            "--span",
            "0:0.8",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_mesh_has_expected_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(
        &["export-mesh", "--config", &cfg, "--grid", "8x8"],
        dir.path(),
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.starts_with("v ")).count(), 64);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("f ")).count(), 98);
}

#[test]
fn export_mesh_warns_on_rank_deficient_projection() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ruled.cfg", RULED);
    let out = meridian(
        &[
            "export-mesh",
            "--config",
            &cfg,
            "--projection",
            "ortho:1,0,0,0,0,1,0,0,1,1,0,0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning:"));
}
