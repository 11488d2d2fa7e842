use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn dilute(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilute"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Data rows of a CSV written by the CLI, keyed by header.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn hard_core_scatter_gives_radius() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[potential]\nkind = \"hardcore\"\nradius = 1.0\n");
    let out = dilute(&["scatter", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("phi.csv")).unwrap();
    assert!(text.starts_with("# command: scatter"));
    assert!(text.lines().any(|l| l == "# a: 1e0"));
    let (header, rows) = read_csv(&dir.path().join("phi.csv"));
    assert_eq!(header, ["r", "phi", "omega", "g"]);
    let phi: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!((phi - 0.5).abs() < 1e-12, "phi(2R) = {phi}");
    assert!(!dir.path().join("ghat.csv").exists());
}

#[test]
fn tabulated_profile_relative_to_config() {
    let dir = TempDir::new().unwrap();
    let profile: String = (0..=100)
        .map(|i| {
            let r = i as f64 / 50.0;
            format!("{r} {}\n", if r < 1.0 { 3.0 * (1.0 - r) } else { 0.0 })
        })
        .collect();
    fs::write(dir.path().join("v.dat"), profile).unwrap();
    let cfg = write_config(
        dir.path(),
        "[potential]\nkind = \"tabulated\"\nfile = \"v.dat\"\n\n[scatter]\nmomenta = [0.0, 1.0]\n",
    );
    let out = dilute(&["scatter", "--config", &cfg, "--tol", "resample=256"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("ghat.csv"));
    assert_eq!(rows.len(), 2);
    let text = fs::read_to_string(dir.path().join("ghat.csv")).unwrap();
    assert!(text.contains("# overrides: resample=256"));
}

#[test]
fn missing_block_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[potential]\nkind = \"hardcore\"\nradius = 1.0\n");
    let out = dilute(&["fbog", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing [fbog] block"));
}

#[test]
fn parse_error_names_the_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[potential]\nkind = \"hardcore\"\nradius = \n");
    let out = dilute(&["scatter", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn bad_potential_and_overrides_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[potential]\nkind = \"squarewell\"\nheight = -1.0\nradius = 1.0\n");
    assert_eq!(dilute(&["scatter", "--config", &cfg], dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), "[potential]\nkind = \"hardcore\"\nradius = 1.0\n");
    assert_eq!(dilute(&["scatter", "--config", &cfg, "--tol", "bogus=1"], dir.path()).status.code(), Some(2));
    assert_eq!(dilute(&["scatter"], dir.path()).status.code(), Some(2));
    assert_eq!(dilute(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn zero_temperature_thermo_is_mean_field_plus_lhy() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "[fthermo]\na = 1.0\nrho_a3 = [1e-6]\nt_over_rho_a = [0.0]\n");
    let out = dilute(&["fthermo", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = read_csv(&dir.path().join("fthermo.csv"));
    let get = |name: &str| -> f64 { rows[0][column(&h, name)].parse().unwrap() };
    assert_eq!(get("thermal"), 0.0);
    assert_eq!(get("total"), get("mean_field") + get("lhy"));
    assert!((get("mean_field") - 4.0 * std::f64::consts::PI * 1e-12).abs() < 1e-25);
}

#[test]
fn regime_failures_exit_one_with_partial_output() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[regime]\na = 1.0\nrho_a3 = [1e-6]\neta = [5e-4, 1e-3]\nnu_over_eta = 0.25\nt_over_rho_a = 1.0\n",
    );
    let out = dilute(&["regime", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let (h, rows) = read_csv(&dir.path().join("regime.csv"));
    let exact = column(&h, "exact_pass");
    assert_eq!(rows[0][exact], "true");
    assert_eq!(rows[1][exact], "false");
}

#[test]
fn symcheck_is_diagonal_and_deterministic() {
    let cfg_text = "[symcheck]\nell = 1.0\nradius = 0.4\nn2_max = 3\nnodes = 12\n";
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let dir = TempDir::new().unwrap();
        let cfg = write_config(dir.path(), cfg_text);
        let out = dilute(&["symcheck", "--config", &cfg, "--threads", threads], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = fs::read_to_string(dir.path().join("symcheck.csv")).unwrap();
        // the config path differs between the two temp dirs
        files.push(text.lines().filter(|l| !l.starts_with("# config")).collect::<Vec<_>>().join("\n"));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn assemble_rejects_uneven_split() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "[assemble]\nbig_l = 2000.0\nn = 8001\nell = 1000.0\na = 1.0\ntemperature = 1e-12\n",
    );
    let out = dilute(&["assemble", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
