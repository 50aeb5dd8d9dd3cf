use std::path::Path;
use std::process::{Command, Output};

use accel_qed::cli::{output::read_csv, ScanConfig, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};
use accel_qed::units::CODATA;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accel-qed")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(EXIT_OK), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows as `column -> values`.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let (header, rows) = read_csv(csv).unwrap();
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn repeated_scans_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "scan.toml",
        &ScanConfig::from_toml_with_overrides(
            "",
            &[
                "geometry.separation = {min = 0.1, max = 10.0, points = 4}".into(),
                "kinematics.a = {min = 0.0, max = 0.5, points = 2, spacing = \"linear\"}".into(),
            ],
        )
        .unwrap()
        .to_toml()
        .unwrap(),
    );
    for command in ["dispersion", "resonance", "mirror"] {
        let outs: Vec<Vec<u8>> = (0..2)
            .map(|k| {
                let path = dir.path().join(format!("{command}-{k}.csv"));
                let out = bin(&[command, "--config", &cfg, "--out", path.to_str().unwrap()]);
                assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
                std::fs::read(path).unwrap()
            })
            .collect();
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{command}");
    }
}

#[test]
fn column_layouts_are_fixed() {
    let r = stdout(&bin(&["resonance", "--set", "geometry.separation.points=2"]));
    let (header, rows) = read_csv(&r).unwrap();
    assert_eq!(header.join(","), "z,a,az,parity,config_class,energy,V_part,W_part,vf_part,error,status");
    assert_eq!(rows.len(), 2);
    let d = stdout(&bin(&["dispersion", "--set", "geometry.separation.points=2"]));
    assert_eq!(read_csv(&d).unwrap().0.join(","), "R,a,t,rest,corr1,corr2,total,quadrature_error,status");
    let m = stdout(&bin(&["mirror", "--set", "geometry.mirror.z.points=2"]));
    assert_eq!(
        read_csv(&m).unwrap().0.join(","),
        "L,z,R_bar,a,orientation_id,total,free_part,plate_part,error,status"
    );
    assert!(r.starts_with("# generator: accel-qed"));
    assert!(r.lines().any(|l| l.starts_with("# config-sha256: ")));
}

#[test]
fn one_point_grid_gives_one_row() {
    let out = stdout(&bin(&["resonance", "--set", "geometry.separation = {min = 2.0, max = 2.0, points = 1}"]));
    assert_eq!(column(&out, "z"), vec![2.0]);
}

#[test]
fn dispersion_corrections_vanish_without_acceleration() {
    let out = stdout(&bin(&[
        "dispersion",
        "--set",
        "geometry.separation.points=5",
        "--set",
        "kinematics.t = {min = 0.5, max = 2.0, points = 3, spacing = \"linear\"}",
    ]));
    assert_eq!(column(&out, "corr1").len(), 15);
    assert!(column(&out, "corr1").iter().chain(&column(&out, "corr2")).all(|&c| c == 0.0));
    assert_eq!(column(&out, "total"), column(&out, "rest"));
}

#[test]
fn si_and_natural_runs_agree() {
    let (w, mu, z_si) = (1e15, 1e-29, [3e-8, 3e-6]);
    let length = CODATA.c / w;
    let energy = CODATA.hbar * CODATA.c / length;
    let mu_nat = (mu * mu / (4.0 * std::f64::consts::PI * CODATA.epsilon0 * CODATA.hbar * CODATA.c * length * length)).sqrt();
    let grid = |lo: f64, hi: f64| format!("geometry.separation = {{min = {lo:e}, max = {hi:e}, points = 2}}");
    let atoms = |w: f64, mu: f64| {
        ["a", "b"]
            .iter()
            .flat_map(|x| {
                [
                    format!("atoms.{x} = {{omega0 = {w:e}, mu_eg = [{mu:e}, 0.0, 0.0], polarizability = {{kind = \"single-resonance\", alpha0 = 1.0, omega0 = {w:e}}}}}"),
                ]
            })
            .collect::<Vec<_>>()
    };
    let mut si = vec!["resonance".to_string(), "--units".into(), "si".into(), "--set".into(), grid(z_si[0], z_si[1])];
    for a in atoms(w, mu) {
        si.extend(["--set".into(), a]);
    }
    let mut nat = vec!["resonance".to_string(), "--set".into(), grid(z_si[0] / length, z_si[1] / length)];
    for a in atoms(1.0, mu_nat) {
        nat.extend(["--set".into(), a]);
    }
    let e_si = column(&stdout(&bin(&si.iter().map(String::as_str).collect::<Vec<_>>())), "energy");
    let e_nat = column(&stdout(&bin(&nat.iter().map(String::as_str).collect::<Vec<_>>())), "energy");
    for (s, n) in e_si.iter().zip(&e_nat) {
        assert!(((s / energy - n) / n).abs() < 1e-9, "{s:e} J vs {n:e}");
    }
    // x dipoles along a z separation: [(1 - k²z²) cos kz + kz sin kz] μ²/(4πε₀ z³)
    for (s, z) in e_si.iter().zip(z_si) {
        let kz = w * z / CODATA.c;
        let closed = ((1.0 - kz * kz) * kz.cos() + kz * kz.sin()) * mu * mu
            / (4.0 * std::f64::consts::PI * CODATA.epsilon0 * z.powi(3));
        assert!(((s - closed) / closed).abs() < 1e-5, "{s:e} vs {closed:e}");
    }
}

#[test]
fn configuration_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "units = \"natural\"\nbogus = 1\n");
    assert_eq!(bin(&["resonance", "--config", &bad]).status.code(), Some(EXIT_CONFIG));
    let empty_grid = bin(&["resonance", "--set", "geometry.separation.points=0"]);
    assert_eq!(empty_grid.status.code(), Some(EXIT_CONFIG));
    assert!(!empty_grid.stderr.is_empty());
    assert_eq!(bin(&["resonance", "--set", "atoms.a.omega0=-1"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(bin(&["resonance", "--config", "/nonexistent/scan.toml"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(EXIT_CONFIG));
    // default grid with a = 0 never reaches the nonthermal side
    assert_eq!(bin(&["crossover"]).status.code(), Some(EXIT_CONFIG));
    // |at| beyond the small-velocity expansion
    let fast = bin(&[
        "dispersion",
        "--set",
        "kinematics.a = {min = 1.0, max = 1.0, points = 1}",
        "--set",
        "kinematics.t = {min = 1.0, max = 1.0, points = 1}",
    ]);
    assert_eq!(fast.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn failed_cells_are_flagged_with_code_three() {
    let out = bin(&[
        "resonance",
        "--set",
        "geometry.separation = {min = 1.0, max = 1.0, points = 1}",
        "--set",
        "numerics.ddc = {epsilon = 0.1, window = 200.0, extrapolation_orders = [0.1, 0.2]}",
    ]);
    assert_eq!(out.status.code(), Some(EXIT_NUMERICAL));
    let text = String::from_utf8(out.stdout).unwrap();
    let (header, rows) = read_csv(&text).unwrap();
    let k = header.iter().position(|h| h == "status").unwrap();
    assert_ne!(rows[0][k], "ok");
}

#[test]
fn configuration_round_trips_through_toml() {
    let config = ScanConfig::from_toml_with_overrides(
        "",
        &["state = \"antisymmetric\"".into(), "geometry.mirror.orientation_grid = 12".into()],
    )
    .unwrap();
    let again = ScanConfig::from_toml(&config.to_toml().unwrap()).unwrap();
    assert_eq!(config, again);
    assert_eq!(config.hash().unwrap(), again.hash().unwrap());
}

#[test]
fn fit_recovers_exponent_from_scan_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let out = bin(&[
        "dispersion",
        "--set",
        "geometry.separation = {min = 1e2, max = 1e3, points = 11}",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let fit = stdout(&bin(&["fit", "--input", path.to_str().unwrap(), "--x", "R", "--y", "rest"]));
    let v: serde_json::Value = serde_json::from_str(&fit).unwrap();
    let exponent = v["exponent"].as_f64().unwrap();
    assert!((exponent + 7.0).abs() < 0.05, "{exponent}");
    assert_eq!(bin(&["fit", "--input", path.to_str().unwrap(), "--x", "R", "--y", "nope"]).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn constants_report_unruh_temperature() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&bin(&["constants"]))).unwrap();
    let text = v.to_string();
    assert!(text.contains("unruh"), "{text}");
}

#[test]
fn crossover_report_finds_the_accelerated_law() {
    let out = stdout(&bin(&[
        "crossover",
        "--set",
        "atoms.a.omega0=1e4",
        "--set",
        "atoms.b.omega0=1e4",
        "--set",
        "atoms.a.polarizability.omega0=1e4",
        "--set",
        "atoms.b.polarizability.omega0=1e4",
        "--set",
        "kinematics.a = {min = 1.0, max = 1.0, points = 1}",
        "--set",
        "geometry.separation = {min = 1e-3, max = 1e3, points = 31}",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let exponent = v["accelerated_fit"]["exponent"].as_f64().unwrap();
    assert!((exponent + 4.0).abs() < 0.2, "{exponent}");
    let t = &v["transition"];
    assert!(t["start"].as_f64().unwrap() < t["end"].as_f64().unwrap());
}
