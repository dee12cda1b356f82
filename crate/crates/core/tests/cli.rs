use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sailroa::config::RunConfig;
use sailroa::io::parse_matrix_csv;
use sailroa::roa::parse_sdpa;

fn sailroa(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sailroa"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn cone_json(extra: &str) -> String {
    format!(r#"{{"sail": {{"kind": "cone", "base_radius": 1.0, "cone_angle_deg": 40.0}}{extra}}}"#)
}

#[test]
fn simulate_row_count_contract() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &cone_json(r#", "rays": 30, "integrator": {"dt": 0.001, "t_end": 0.01}"#),
    );
    let out = dir.path().join("out");
    let o = sailroa(&["simulate"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], sailroa::dynamics::Trajectory::CSV_HEADER);
    let svg = std::fs::read_to_string(out.join("trajectory.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 13);
}

#[test]
fn out_of_range_cone_angle_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"sail": {"kind": "cone", "base_radius": 1.0, "cone_angle_deg": 95.0}}"#,
    );
    for cmd in ["simulate", "linearize", "roa"] {
        let o = sailroa(&[cmd], &cfg, &dir.path().join("out"));
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("cone_angle_deg"));
    }
}

#[test]
fn unknown_key_and_missing_file_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "u.json", &cone_json(r#", "rayz": 10"#));
    assert_eq!(sailroa(&["linearize"], &cfg, dir.path()).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(sailroa(&["linearize"], &missing, dir.path()).status.code(), Some(2));
}

#[test]
fn single_value_sweep_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        &cone_json(r#", "sweep": {"parameter": "mast_length", "values": [2.0]}"#),
    );
    let o = sailroa(&["sweep"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("out/sweep.csv").exists());
}

#[test]
fn sweep_without_sweep_section_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &cone_json(""));
    assert_eq!(sailroa(&["sweep"], &cfg, &dir.path().join("out")).status.code(), Some(2));
}

#[test]
fn linearize_writes_a_with_kinematic_pattern_and_p() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &cone_json(""));
    let out = dir.path().join("out");
    let o = sailroa(&["linearize"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("A6  -5.000000e-1"));
    assert!(stdout.contains("Hurwitz: yes"));

    let a = parse_matrix_csv(&std::fs::read_to_string(out.join("A.csv")).unwrap()).unwrap();
    assert_eq!(a.shape(), (8, 8));
    // rows 0..4 are x' = vx, y' = vy, theta' = wy, phi' = wx
    let ones = [(0, 4), (1, 5), (2, 7), (3, 6)];
    for i in 0..4 {
        for j in 0..8 {
            let expected = if ones.contains(&(i, j)) { 1.0 } else { 0.0 };
            assert!((a[(i, j)] - expected).abs() < 1e-12, "A[{i}][{j}] = {}", a[(i, j)]);
        }
    }
    let p = parse_matrix_csv(&std::fs::read_to_string(out.join("P.csv")).unwrap()).unwrap();
    assert!(p.symmetric_eigenvalues().min() > 0.0);
    assert!(out.join("eigenvalues.csv").exists());
}

#[test]
fn zero_damping_reports_verdict_without_crashing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "z.json",
        &cone_json(r#", "damping": {"d11": 0.0, "d12": 0.0, "d22": 0.0}"#),
    );
    let out = dir.path().join("out");
    let o = sailroa(&["linearize"], &cfg, &out);
    let code = o.status.code();
    assert!(code == Some(0) || code == Some(4), "{code:?}");
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("spectral abscissa"));
    assert!(out.join("A.csv").exists() && out.join("linearization.csv").exists());
    if code == Some(4) {
        assert!(!out.join("P.csv").exists());
        // the ROA pipeline refuses the same configuration
        assert_eq!(sailroa(&["roa"], &cfg, &dir.path().join("roa")).status.code(), Some(4));
    }
}

#[test]
fn print_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        &cone_json(r#", "mass": {"mast_length": 2.3}, "initial": {"roll_deg": 5.0}"#),
    );
    let o = Command::new(env!("CARGO_BIN_EXE_sailroa"))
        .args(["roa", "--print-config", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let printed = String::from_utf8(o.stdout).unwrap();
    let original = RunConfig::load(&cfg).unwrap();
    assert_eq!(RunConfig::from_json(&printed).unwrap(), original);
    assert_eq!(original.mass.mast_length, 2.3);
}

#[test]
fn roa_exports_parseable_sdpa() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &cone_json(""));
    let out = dir.path().join("out");
    let sdpa = dir.path().join("sail.dat-s");
    let o = Command::new(env!("CARGO_BIN_EXE_sailroa"))
        .args(["roa", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .arg("--export-sdpa")
        .arg(&sdpa)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let problem = parse_sdpa(&std::fs::read_to_string(&sdpa).unwrap()).unwrap();
    assert_eq!(problem.block_sizes.len(), 2);
    assert!(problem.m > 0 && !problem.entries.is_empty());
    for name in ["x_y", "x_phi", "theta_phi", "y_theta"] {
        assert!(out.join(format!("projection_{name}.csv")).exists());
        assert!(out.join(format!("projection_{name}.svg")).exists());
    }
    let summary = std::fs::read_to_string(out.join("roa_summary.csv")).unwrap();
    assert!(summary.starts_with("quantity,value\nrho,"));
}

#[test]
fn export_flag_only_for_roa() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &cone_json(""));
    let o = Command::new(env!("CARGO_BIN_EXE_sailroa"))
        .args(["linearize", "--export-sdpa", "x.dat-s", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_mast_lengths_both_report_four_planes() {
    let dir = tempfile::tempdir().unwrap();
    for l in ["2.3", "2.5"] {
        let cfg = write_config(
            dir.path(),
            &format!("cap{l}.json"),
            &format!(
                r#"{{"sail": {{"kind": "spherical_cap", "cap_base_radius": 0.5, "curvature_radius": 1.0}},
                    "mass": {{"mast_length": {l}}}}}"#
            ),
        );
        let out = dir.path().join(format!("out{l}"));
        let o = sailroa(&["roa"], &cfg, &out);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let table = std::fs::read_to_string(out.join("roa_projections.csv")).unwrap();
        assert_eq!(table.lines().count(), 5);
    }
}

#[test]
fn sweep_writes_one_row_per_value_and_overlays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        &cone_json(r#", "sweep": {"parameter": "mast_length", "values": [2.0, 1.0e-3, 2.2], "metrics": ["hurwitz", "rho"]}"#),
    );
    let out = dir.path().join("out");
    let o = sailroa(&["sweep"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "parameter,value,status,hurwitz,rho,error");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("mast_length,2.00000000e0,ok,true,"));
    assert!(out.join("sweep_x_y.svg").exists());
    assert!(out.join("mast_length_2").join("roa_summary.csv").exists());
}

#[test]
fn diverging_run_exits_with_simulation_code_and_keeps_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "d.json",
        &cone_json(
            r#", "rays": 30, "initial": {"pitch_deg": 60.0, "wy_deg_s": 200.0}, "integrator": {"dt": 0.01, "t_end": 20.0, "max_tilt_deg": 70.0}"#,
        ),
    );
    let out = dir.path().join("out");
    let o = sailroa(&["simulate"], &cfg, &out);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t ="));
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(csv.lines().count() > 1);
}
