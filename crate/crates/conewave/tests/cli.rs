use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use conewave::fields::io::{read_field, write_field, write_spacetime, StoredField};
use conewave::fields::{Axis, Field, Grid, Sampled, SpacetimeField};
use serde_json::Value;

fn conewave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conewave"))
        .current_dir(dir)
        .env_remove("CONEWAVE_JOBS")
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn small_gaussian(dir: &Path) -> std::path::PathBuf {
    let space = Grid::new(1, 256, 32.0).unwrap();
    let time = Axis::new(256, 32.0).unwrap();
    let f = SpacetimeField::from_real_fn(space, time, |x, t| (-std::f64::consts::PI * (x[0] * x[0] + t * t)).exp());
    let p = dir.join("gauss.bin");
    write_spacetime(&p, &f).unwrap();
    p
}

#[test]
fn usage_and_config_errors_exit_3() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&conewave(d.path(), &["verify", "nope"])), 3);
    assert_eq!(code(&conewave(d.path(), &["no-such-command"])), 3);
    assert_eq!(code(&conewave(d.path(), &["--jobs", "0", "kernel-table"])), 3);

    let o = Command::new(env!("CARGO_BIN_EXE_conewave"))
        .current_dir(d.path())
        .env("CONEWAVE_JOBS", "0")
        .arg("kernel-table")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);

    fs::write(d.path().join("bad.toml"), "[kernel]\nalpha = 0.4\nbogus = 1\n").unwrap();
    assert_eq!(code(&conewave(d.path(), &["--config", "bad.toml", "kernel-table"])), 3);
    fs::write(d.path().join("neg.toml"), "[kernel]\nalpha = -1.0\n").unwrap();
    assert_eq!(code(&conewave(d.path(), &["--config", "neg.toml", "kernel-table"])), 3);
    assert_eq!(code(&conewave(d.path(), &["op-apply"])), 3);
}

#[test]
fn help_and_version_exit_0() {
    let d = tempfile::tempdir().unwrap();
    let o = conewave(d.path(), &["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("norm-test"));
    assert_eq!(code(&conewave(d.path(), &["--version"])), 0);
}

#[test]
fn failed_check_exits_2() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("strict.toml"), "[tolerances]\nft_identity = 1e-30\n").unwrap();
    let o = conewave(d.path(), &["--config", "strict.toml", "--out", "o", "verify", "ft-identity"]);
    assert_eq!(code(&o), 2);
    let r = report(&d.path().join("o/verify_ft_identity.json"));
    assert_eq!(r["passed"], Value::Bool(false));
}

#[test]
fn kernel_table_is_byte_identical_across_runs_and_jobs() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&conewave(d.path(), &["--out", "a", "kernel-table"])), 0);
    assert_eq!(code(&conewave(d.path(), &["--out", "b", "--jobs", "1", "kernel-table"])), 0);
    for name in ["kernel_table.csv", "kernel_physical.csv", "kernel_report.csv"] {
        let a = fs::read(d.path().join("a").join(name)).unwrap();
        let b = fs::read(d.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let ja = fs::read_to_string(d.path().join("a/kernel_report.json")).unwrap();
    let jb = fs::read_to_string(d.path().join("b/kernel_report.json")).unwrap();
    assert_eq!(ja.replace("\"b\"", "\"a\""), jb.replace("\"b\"", "\"a\""));

    let csv = fs::read_to_string(d.path().join("a/kernel_table.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("xi,omega_hat,s_hat,e_hat"));
    assert!(lines.next().unwrap().ends_with(",,"));
    assert_eq!(csv.lines().count(), 1002);
}

#[test]
fn kernel_table_without_physical_form_leaves_block_empty() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("c.toml"), "[kernel]\nalpha = 0.2\nn = 2\n").unwrap();
    let o = conewave(d.path(), &["--config", "c.toml", "--out", "o", "kernel-table"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(d.path().join("o/kernel_physical.csv")).unwrap().trim(), "x,omega");
    let r = report(&d.path().join("o/kernel_report.json"));
    assert!(r["notes"][0].as_str().unwrap().contains("physical"));
}

#[test]
fn seed_override_is_echoed() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&conewave(d.path(), &["--seed", "99", "--out", "o", "kernel-table"])), 0);
    let r = report(&d.path().join("o/kernel_report.json"));
    assert_eq!(r["config"]["seed"], Value::from(99));
}

fn regions(csv: &str) -> Vec<(f64, f64, String)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[1].parse().unwrap(), c[4].to_string())
        })
        .collect()
}

#[test]
fn scan_region_labels_line_segments() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&conewave(d.path(), &["--out", "o", "scan-region"])), 0);
    for (inv_p, _, region) in regions(&fs::read_to_string(d.path().join("o/scan_region.csv")).unwrap()) {
        if inv_p > 0.5 + 1e-9 && inv_p < 0.9 - 1e-9 {
            assert_eq!(region, "RegionII", "1/p={inv_p}");
        } else {
            assert_ne!(region, "RegionII", "1/p={inv_p}");
        }
    }

    fs::write(d.path().join("n2.toml"), "[kernel]\nn = 2\nalpha = 1.0\n[scan]\nalphas = [1.0]\noff_line = [0.05]\n")
        .unwrap();
    assert_eq!(code(&conewave(d.path(), &["--config", "n2.toml", "--out", "p", "scan-region"])), 0);
    for (inv_p, inv_q, region) in regions(&fs::read_to_string(d.path().join("p/scan_region.csv")).unwrap()) {
        let on_line = (inv_p - inv_q - 0.5).abs() < 1e-9;
        if !on_line {
            assert_eq!(region, "ScalingViolated");
        } else if inv_p > 0.625 + 1e-9 && inv_p < 0.875 - 1e-9 {
            assert_eq!(region, "RegionI", "1/p={inv_p}");
        }
    }
}

#[test]
fn op_apply_zero_input_gives_zero_output() {
    let d = tempfile::tempdir().unwrap();
    let space = Grid::new(1, 128, 16.0).unwrap();
    let time = Axis::new(128, 16.0).unwrap();
    write_spacetime(&d.path().join("zero.bin"), &SpacetimeField::zeros(space, time)).unwrap();
    let o = conewave(d.path(), &["--out", "o", "op-apply", "--input", "zero.bin"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let StoredField::Spacetime(g) = read_field(&d.path().join("o/output.bin")).unwrap() else { panic!() };
    assert!(g.samples().iter().all(|z| z.norm() == 0.0));
    assert!(d.path().join("o/op_apply_slice.csv").exists());
}

#[test]
fn op_apply_paths_agree_and_export_multiplier() {
    let d = tempfile::tempdir().unwrap();
    small_gaussian(d.path());
    for path in ["slices", "multiplier"] {
        let out = format!("o-{path}");
        let o = conewave(d.path(), &["--out", &out, "op-apply", "--input", "gauss.bin", "--path", path]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let r = report(&d.path().join(&out).join("op_apply.json"));
        let rec = r["records"].as_array().unwrap().iter().find(|x| x["check"] == "cross-path").unwrap();
        assert!(rec["measured"].as_f64().unwrap() < 1e-3);
    }
    let o = conewave(d.path(), &["--out", "m", "op-apply", "--input", "gauss.bin", "--export-multiplier", "m.bin"]);
    assert_eq!(code(&o), 0);
    let StoredField::Spacetime(m) = read_field(&d.path().join("m.bin")).unwrap() else { panic!() };
    assert_eq!(m.time().points(), 256);
}

#[test]
fn op_apply_rejects_bad_inputs() {
    let d = tempfile::tempdir().unwrap();
    let grid = Grid::new(1, 32, 8.0).unwrap();
    write_field(&d.path().join("flat.bin"), &Field::zeros(grid)).unwrap();
    assert_eq!(code(&conewave(d.path(), &["op-apply", "--input", "flat.bin"])), 3);
    assert_eq!(code(&conewave(d.path(), &["op-apply", "--input", "missing.bin"])), 3);
    let p = small_gaussian(d.path());
    fs::write(&p, [0u8; 24]).unwrap();
    assert_eq!(code(&conewave(d.path(), &["op-apply", "--input", "gauss.bin"])), 3);
}
