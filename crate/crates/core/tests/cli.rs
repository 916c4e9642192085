//! End-to-end runs of the `samara` binary.

use std::path::Path;
use std::process::{Command, Output};

use samara_core::config::RobotConfig;
use samara_core::optimizer::{evaluate, DesignVector, OptimizerOptions};
use samara_core::propulsion::solve_operating_point;
use samara_core::robot::CRAZYFLIE_BENCH;
use samara_core::{solve_trim, Robot};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_samara"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = run(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn value(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.trim() == key).then(|| v.split_whitespace().next().unwrap().parse().unwrap())
        })
        .unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn predict_reports_trim() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&["predict", "--voltage", "3.5"], dir.path());
    let trim = solve_trim(3.5, &Robot::crazyflie_bench()).unwrap();
    assert_eq!(value(&out, "thrust"), samara_core::report::sig9(trim.thrust).parse::<f64>().unwrap());
    assert_eq!(value(&out, "robot_mass"), 13.8);
    assert!(!out.contains('\r'));
}

#[test]
fn low_voltage_cannot_spin_up() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["predict", "--voltage", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot spin up"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "[geometry]\nspan_mm = 3\n").unwrap();
    let out = run(&["-c", "bad.cfg", "predict", "--voltage", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.cfg:2") && err.contains("span_mm"), "{err}");
    assert_eq!(run(&["predict", "--voltage", "5"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["--profile", "nope", "config"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["predict"], dir.path()).status.code(), Some(2));
}

#[test]
fn infeasible_seed_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("wide.cfg"), "[geometry]\nr_tip_mm = 250\n[propulsion]\nmount_radius_mm = 260\n").unwrap();
    let out = run(&["-c", "wide.cfg", "optimize", "--out", "o.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_is_quadratic_and_matches_predict() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["sweep", "--v-min", "2.3", "--v-max", "3.5", "--steps", "7", "--out", "s.csv"], dir.path());
    assert!(text.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "U_V,omega_rad_s,omega_sq,thrust_mN,torque_Nmm");
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 7);
    let slope = rows[0][3] / rows[0][2];
    for r in &rows {
        assert!((r[3] / r[2] / slope - 1.0).abs() < 1e-7);
    }
    for (row, v) in [(&rows[0], "2.3"), (&rows[6], "3.5")] {
        let p = ok(&["predict", "--voltage", v], dir.path());
        assert_eq!(row[1], value(&p, "revolving_speed"));
        assert_eq!(row[3], value(&p, "thrust_mn"));
    }
}

#[test]
fn prop_curve_starts_at_static_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = ok(&["prop-curve", "--voltage", "3.5", "--inflow-max", "10"], dir.path());
    assert_eq!(csv.lines().next().unwrap(), "axial_inflow_m_s,thrust_N,omega_rad_s,fixed_omega_thrust_N");
    let rows = csv_rows(&csv);
    let r = Robot::crazyflie_bench();
    let s = solve_operating_point(3.5, 0.0, &r.propeller, &r.motor, r.aero.rho).unwrap();
    assert!((rows[0][1] / s.thrust - 1.0).abs() < 1e-8);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(rows.iter().filter(|r| r[0] > 2.0).all(|r| r[3] < r[1]));
}

#[test]
fn optimize_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(
        &["--profile", "rectangular-seed", "optimize", "--out", "o.cfg", "--history", "h.csv", "--planform", "p.csv"],
        d,
    );
    let history = std::fs::read_to_string(d.join("h.csv")).unwrap();
    assert_eq!(history.lines().next().unwrap(), "iteration,best_objective_N");
    let best: Vec<f64> = csv_rows(&history).iter().map(|r| r[1]).collect();
    assert!(best.windows(2).all(|w| w[1] >= w[0]));
    let planform = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert!(planform.starts_with("r_m,chord_m,leading_edge_y_m,trailing_edge_y_m\n"));

    let cfg = RobotConfig::load(CRAZYFLIE_BENCH, &[d.join("o.cfg")]).unwrap();
    let robot = cfg.to_robot().unwrap();
    let eval = evaluate(&DesignVector::of_robot(&robot), &robot, &OptimizerOptions::default());
    assert_eq!(value(&out, "objective"), samara_core::report::sig9(eval.objective).parse::<f64>().unwrap());
    let pitch = cfg.get("geometry", "pitch_deg").unwrap();
    assert!((pitch - 27.5).abs() <= 4.0, "{pitch}");

    // the written file is a complete config on its own
    let again = RobotConfig::load("rectangular-seed", &[d.join("o.cfg")]).unwrap();
    assert_eq!(again, cfg);
}

#[test]
fn fit_writes_loadable_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let fx = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/calibration");
    let report = ok(
        &[
            "fit",
            "--measurements",
            fx.join("clean.csv").to_str().unwrap(),
            "--geometries",
            fx.join("geometries").to_str().unwrap(),
            "--out",
            "aero.cfg",
        ],
        d,
    );
    assert!((value(&report, "c_l1") / 2.0 - 1.0).abs() < 0.01);
    assert!(report.contains("robot_id,rms_mN\nrobot_a,"));
    let text = std::fs::read_to_string(d.join("aero.cfg")).unwrap();
    assert!(text.starts_with("[aero]\n"));
    ok(&["-c", "aero.cfg", "predict", "--voltage", "3.5"], d);

    std::fs::write(d.join("m.csv"), "robot_id,omega_rad_s,thrust_mN\nrobot_z,30,100\n").unwrap();
    let out = run(
        &["fit", "--measurements", "m.csv", "--geometries", fx.join("geometries").to_str().unwrap(), "--out", "x.cfg"],
        d,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("robot_z"));
}

#[test]
fn spanwise_and_config_dump() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["predict", "--voltage", "3", "--spanwise", "span.csv"], d);
    let span = std::fs::read_to_string(d.join("span.csv")).unwrap();
    assert!(span.starts_with("r_m,v_a_m_s,v_theta_m_s,alpha_deg,dT_dr_N_m,dQ_dr_N\n"));
    assert_eq!(span.lines().count(), 129);
    let dump = ok(&["config"], d);
    std::fs::write(d.join("full.cfg"), &dump).unwrap();
    assert_eq!(ok(&["--profile", "rectangular-seed", "-c", "full.cfg", "config"], d), dump);
}
