use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cpe_core::io::csv::{read_diagnostics, read_table};
use cpe_core::io::snapshot::read_snapshot;

fn cpe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpe")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    let text = format!("output.directory = {}\n{body}", dir.join("out").display());
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn run_on_constant_preset_writes_flat_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "time.t_end = 0.01\n");
    let o = cpe(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o);
    assert!(line.starts_with("cpe command=run status=ok"), "{line}");
    assert!(line.contains("steps=10"));
    let recs = read_diagnostics(&dir.path().join("out/diagnostics.csv")).unwrap();
    assert_eq!(recs.len(), 11);
    for r in &recs {
        assert!((r.energy - recs[0].energy).abs() <= 1e-12);
    }
    let snap = read_snapshot(&dir.path().join("out/final.cpe")).unwrap();
    assert!((snap.state.t - 0.01).abs() < 1e-15);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let body = "time.t_end = 0.005\ninit.preset = column\ninit.noise = 0.01\nseed = 3\n";
    let cfg = write_config(dir.path(), "a.cfg", body);
    assert_eq!(cpe(&["run", &cfg]).status.code(), Some(0));
    let csv1 = fs::read(dir.path().join("out/diagnostics.csv")).unwrap();
    let snap1 = fs::read(dir.path().join("out/final.cpe")).unwrap();
    assert_eq!(cpe(&["run", &cfg]).status.code(), Some(0));
    assert_eq!(csv1, fs::read(dir.path().join("out/diagnostics.csv")).unwrap());
    assert_eq!(snap1, fs::read(dir.path().join("out/final.cpe")).unwrap());
}

#[test]
fn check_reports_identities_and_rejects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "time.t_end = 0.002\ninit.preset = density_relax\n");
    assert_eq!(cpe(&["run", &cfg]).status.code(), Some(0));
    let snap = dir.path().join("out/final.cpe");
    let before = fs::read(&snap).unwrap();
    let o = cpe(&["check", snap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max_identity_residual="));
    assert_eq!(before, fs::read(&snap).unwrap(), "check must not touch its input");

    let mut bad = before.clone();
    let n = bad.len();
    bad[n / 2] ^= 0x40;
    let damaged = dir.path().join("damaged.cpe");
    fs::write(&damaged, bad).unwrap();
    let o = cpe(&["check", damaged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("checksum"));
}

#[test]
fn invalid_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", "params.eta = -1\n");
    let o = cpe(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("params.eta"));
    assert_eq!(cpe(&["run", "/nonexistent.cfg"]).status.code(), Some(1));
    assert_eq!(cpe(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn solver_failure_exits_with_two_and_names_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "cfl.cfg",
        "init.preset = shear\ninit.amplitude = 50\ntime.dt = 0.1\ntime.t_end = 1\n",
    );
    let o = cpe(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 0"));
    assert!(stdout(&o).contains("status=solver_error"));
}

#[test]
fn continuation_eta_writes_decreasing_monitor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "cont.cfg",
        "init.preset = density_relax\ncontinuation.t_end = 0.005\n",
    );
    let o = cpe(&["continuation", &cfg, "--stage", "eta", "--rungs", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (cols, rows) = read_table(&dir.path().join("out/continuation_eta.csv")).unwrap();
    assert_eq!(rows.len(), 4);
    let i = cols.iter().position(|c| c == "eta_int_xi_m10").unwrap();
    for w in rows.windows(2) {
        assert!(w[1][i] < w[0][i]);
    }
    assert_eq!(cpe(&["continuation", &cfg, "--stage", "nope"]).status.code(), Some(1));
}

#[test]
fn info_describes_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "run.cfg", "time.t_end = 0.003\n");
    assert_eq!(cpe(&["run", &cfg]).status.code(), Some(0));
    let o = cpe(&["info", dir.path().join("out/final.cpe").to_str().unwrap()]);
    assert!(stdout(&o).contains("kind=snapshot") && stdout(&o).contains("nx1=16"));
    let o = cpe(&["info", dir.path().join("out/diagnostics.csv").to_str().unwrap()]);
    assert!(stdout(&o).contains("kind=diagnostics") && stdout(&o).contains("rows=4"));
    assert_eq!(cpe(&["info", "/nonexistent"]).status.code(), Some(1));
}

#[test]
fn mms_reports_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "mms.cfg",
        "params.r = 0\nparams.delta = 1e-8\nmms.t_end = 0.04\nmms.dt_list = 0.008,0.004\nmms.dt_spatial = 0.008\n",
    );
    let o = cpe(&["mms", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("spatial_ratio="));
    let (_, rows) = read_table(&dir.path().join("out/mms.csv")).unwrap();
    assert_eq!(rows.len(), 4);
}
