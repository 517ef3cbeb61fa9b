use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn emdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emdual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<Option<f64>> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| {
            let cell = l.split(',').nth(idx).unwrap();
            if cell.is_empty() {
                None
            } else {
                Some(cell.parse().unwrap())
            }
        })
        .collect()
}

#[test]
fn trajectory_davies_fulling_geometry() {
    let out = emdual(&["trajectory", "--traj", "df", "--s", "0.66", "--t-range=-5:5:11"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("t,z,v,eta,gamma,alpha,peel,jerk_sq\n"));
    assert!(!csv.contains('\r'));
    let z: Vec<f64> = column(&csv, "z").into_iter().map(Option::unwrap).collect();
    assert_eq!(z[5], 0.0);
    for i in 0..5 {
        assert_eq!(z[i], z[10 - i]);
    }
}

#[test]
fn trajectory_constant_columns() {
    let csv = stdout(&emdual(&["trajectory", "--traj", "uniform", "--kappa", "2", "--t-range=-3:3:7"]));
    let alpha: Vec<f64> = column(&csv, "alpha").into_iter().map(Option::unwrap).collect();
    assert!(alpha.iter().all(|&a| (a + 2.0).abs() < 1e-14));
    let csv = stdout(&emdual(&["trajectory", "--traj", "cw", "--kappa", "1.5", "--t-range", "0.1:50:9"]));
    let peel: Vec<f64> = column(&csv, "peel").into_iter().map(Option::unwrap).collect();
    assert!(peel.iter().all(|&p| p == 1.5));
}

#[test]
fn spectrum_both_methods_agree() {
    let out = emdual(&[
        "spectrum", "--traj", "df", "--s", "0.7", "--method", "both", "--omega-range", "0.1:8:12",
        "--theta-range", "0.1:3:12", "--gate", "1e-9", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert!(doc["max_rel_diff"].as_f64().unwrap() < 1e-9);
    assert_eq!(doc["data"]["rows"].as_array().unwrap().len(), 144);
    assert_eq!(doc["failed_points"], 0);
}

#[test]
fn spectrum_e2_scales_values() {
    let base = stdout(&emdual(&["spectrum", "--traj", "uniform", "--omega-range", "1:2:2", "--theta-range", "1:2:2"]));
    let scaled = stdout(&emdual(&[
        "spectrum", "--traj", "uniform", "--omega-range", "1:2:2", "--theta-range", "1:2:2", "--e2", "2",
    ]));
    for (a, b) in column(&base, "value").into_iter().zip(column(&scaled, "value")) {
        assert_eq!(2.0 * a.unwrap(), b.unwrap());
    }
}

#[test]
fn axis_poles_become_empty_cells() {
    let out = emdual(&[
        "spectrum", "--traj", "uniform", "--omega-range", "1:2:2", "--theta-range", "0:1:2", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["failed_points"], 2);
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r[2].is_null()));
}

#[test]
fn beta_uniform_level_sets() {
    let csv = stdout(&emdual(&["beta", "--traj", "uniform", "--pq-range", "0.5:2:3"]));
    let p = column(&csv, "p");
    let q = column(&csv, "q");
    let v = column(&csv, "value");
    for i in 0..v.len() {
        for j in 0..v.len() {
            let (pi, qi, pj, qj) = (p[i].unwrap(), q[i].unwrap(), p[j].unwrap(), q[j].unwrap());
            if ((pi * qi) / (pj * qj) - 1.0).abs() < 1e-14 {
                assert!((v[i].unwrap() / v[j].unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn particles_report_totals() {
    let out = emdual(&["particles", "--traj", "wd", "--vmax", "0.03", "--pq-range", "0.1:3:3", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let n_tot = doc["n_tot"].as_f64().unwrap();
    let closed = doc["n_tot_closed"].as_f64().unwrap();
    assert!((n_tot / closed - 1.0).abs() < 0.01);
    assert!((doc["vmax_sq_over_6"].as_f64().unwrap() - 1.5e-4).abs() < 1e-15);
}

#[test]
fn energy_gate_and_report() {
    let out = emdual(&["energy", "--traj", "df", "--s", "0.5", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["max_rel_diff"].as_f64().unwrap() < 1e-3);
    let closed = doc["data"]["closed_form"].as_f64().unwrap();
    assert!((closed - 0.021077925899833656).abs() < 1e-15);
    // an impossible gate fails with exit code 3 but still writes the report
    let out = emdual(&["energy", "--traj", "df", "--s", "0.5", "--gate", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("quantity,value\n"));
}

#[test]
fn energy_non_relativistic_value() {
    let csv = stdout(&emdual(&["energy", "--traj", "df", "--s", "0.05"]));
    let line = csv.lines().find(|l| l.starts_with("closed_form,")).unwrap();
    let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    let nr = 2.0 * 0.05f64.powi(2) / (9.0 * std::f64::consts::PI);
    assert!((e / nr - 1.0).abs() < 0.01);
}

#[test]
fn thermal_verdicts() {
    let out = emdual(&["thermal", "--traj", "df", "--s", "0.99", "--theta", "0.01", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["data"]["verdict"], "thermal");
    let t = doc["data"]["t_fit"].as_f64().unwrap();
    let r = doc["data"]["reference"]["value"].as_f64().unwrap();
    assert!((0.98..=1.02).contains(&(t / r)));

    let doc: Value = serde_json::from_str(&stdout(&emdual(&["thermal", "--traj", "wd", "--A", "3", "--B", "0.03", "--format", "json"]))).unwrap();
    assert_eq!(doc["data"]["verdict"], "wien_only");

    let csv = stdout(&emdual(&["thermal", "--traj", "uniform", "--theta-range", "0.1:1.5:5"]));
    let products: Vec<f64> = column(&csv, "t_uv_sin_theta").into_iter().map(Option::unwrap).collect();
    for p in &products {
        assert!((p / products[0] - 1.0).abs() < 0.05);
    }
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",not_thermal")));
}

#[test]
fn exit_codes() {
    // configuration errors
    assert_eq!(emdual(&["spectrum"]).status.code(), Some(2));
    assert_eq!(emdual(&["spectrum", "--traj", "df"]).status.code(), Some(2));
    assert_eq!(emdual(&["spectrum", "--traj", "df", "--s", "1.5"]).status.code(), Some(2));
    assert_eq!(emdual(&["spectrum", "--traj", "df", "--s", "0.5", "--omega-range", "2:1:5"]).status.code(), Some(2));
    assert_eq!(emdual(&["spectrum", "--traj", "wd", "--A", "1", "--B", "2"]).status.code(), Some(2));
    assert_eq!(emdual(&["bogus"]).status.code(), Some(2));
    // gate failure
    assert_eq!(emdual(&["duality-check", "--traj", "uniform", "--gate", "0"]).status.code(), Some(3));
    // unsupported combinations
    assert_eq!(emdual(&["energy", "--traj", "uniform"]).status.code(), Some(4));
    assert_eq!(emdual(&["spectrum", "--traj", "cw"]).status.code(), Some(4));
    assert_eq!(emdual(&["particles", "--traj", "df", "--s", "0.5"]).status.code(), Some(4));
    assert_eq!(emdual(&["beta", "--traj", "wd", "--A", "2", "--B", "1", "--side", "double"]).status.code(), Some(4));
    // success
    assert_eq!(emdual(&["duality-check", "--traj", "df", "--s", "0.4"]).status.code(), Some(0));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_precedence_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "# df run\ntraj = df\ns = 0.3\nkappa = 2\nformat = json\n");
    let out_path = dir.path().join("out.json");
    let out = emdual(&[
        "energy", "--config", cfg.to_str().unwrap(), "--s", "0.5", "--format", "json", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // flag s = 0.5 wins, kappa = 2 comes from the file
    assert_eq!(doc["trajectory"]["s"], 0.5);
    assert_eq!(doc["trajectory"]["kappa"], 2.0);

    write(&cfg, "traj = df\ns = 0.3\nwavelength = 3\n");
    let out = emdual(&["energy", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wavelength"));

    let missing = dir.path().join("absent.cfg");
    assert_eq!(emdual(&["energy", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_independent_of_thread_count() {
    let args = [
        "spectrum", "--traj", "wd", "--A", "2", "--B", "1", "--omega-range", "0.2:5:6", "--theta-range", "0.2:3:6",
        "--method", "recipe",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_emdual"))
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_emdual"))
        .args(args)
        .env("RAYON_NUM_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}
