//! End-to-end runs of the `genjacobi` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn genjacobi(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genjacobi"))
        .args(args)
        .current_dir(dir)
        .env_remove("GENJACOBI_OUT")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Column `col` of `residuals.csv` as numbers, keyed by degree.
fn residual_column(dir: &Path, col: &str) -> Vec<(usize, f64)> {
    let text = fs::read_to_string(dir.join("residuals.csv")).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == col).unwrap();
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[k].parse().unwrap())
        })
        .collect()
}

#[test]
fn legendre_run_passes_with_modified_jacobi_constant() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "leg.cfg", "n_max = 400\n");
    let out = tmp.path().join("out");
    let o = genjacobi(&["run", &cfg, "--out", out.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for f in ["recurrence.csv", "residuals.csv", "parametrix_report.csv", "summary.txt"] {
        assert!(out.join(f).is_file(), "{f} written");
    }
    for (n, v) in residual_column(&out, "n2_res_a") {
        if n >= 200 {
            assert!((v - 0.0625).abs() < 1e-4, "n={n}: {v}");
        }
    }
    assert!(stdout(&o).contains("overall: PASS"));
}

#[test]
fn singular_run_reports_second_order_residuals() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "sing.cfg",
        "alpha = -0.5\nbeta = -0.5\ngamma = 1\nx0 = 0.3\nc2 = 2\nn_max = 400\n",
    );
    let out = tmp.path().join("out");
    let o = genjacobi(&["run", &cfg, "--out", out.to_str().unwrap(), "--paranoid"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary, stdout(&o));
    let line = summary.lines().find(|l| l.contains("envelope slope (remark form)")).unwrap();
    let slope = |tag: &str| -> f64 {
        let rest = &line[line.find(tag).unwrap() + tag.len()..];
        rest.split_whitespace().next().unwrap().parse().unwrap()
    };
    assert!((slope(" a=") + 2.0).abs() <= 0.3, "{line}");
    assert!((slope(" b=") + 2.0).abs() <= 0.3, "{line}");
    assert!(summary.contains("remark form a_n = 1/2 - (M/n) cos theta_n leaves O(1/n^2) residuals"));
    assert!(summary.contains("[recurrence] drift="));
    assert!(!summary.contains("drift=not measured"));
}

#[test]
fn unwritable_output_directory_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "leg.cfg", "n_max = 60\n");
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    let o = genjacobi(&["run", &cfg, "--out", out.to_str().unwrap()], tmp.path());
    assert_ne!(o.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn all_suites_off_writes_only_the_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "off.cfg",
        "n_max = 60\nsuites.recurrence = false\nsuites.asymptotics = false\nsuites.parametrix = false\n",
    );
    let out = tmp.path().join("out");
    let o = genjacobi(&["run", &cfg, "--out", out.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let files: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(files, vec!["summary.txt".to_string()]);
}

#[test]
fn runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "gen.cfg",
        "alpha = 0\nbeta = 0.5\ngamma = 0.6\nx0 = -0.2\nc2 = 4\nh.kind = exp_linear\nh.param = 1\nn_max = 150\n",
    );
    let dirs = ["a", "b"].map(|d| tmp.path().join(d));
    for d in &dirs {
        let o = genjacobi(&["run", &cfg, "--out", d.to_str().unwrap()], tmp.path());
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    for f in ["recurrence.csv", "residuals.csv", "parametrix_report.csv", "summary.txt"] {
        assert_eq!(fs::read(dirs[0].join(f)).unwrap(), fs::read(dirs[1].join(f)).unwrap(), "{f}");
    }
}

#[test]
fn output_directory_from_config_and_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.cfg", "n_max = 60\nsuites.parametrix = false\noutputs = from_cfg\n");
    let o = Command::new(env!("CARGO_BIN_EXE_genjacobi"))
        .args(["run", &cfg])
        .current_dir(tmp.path())
        .env("GENJACOBI_OUT", tmp.path().join("from_env"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(tmp.path().join("from_cfg/summary.txt").is_file());
    assert!(!tmp.path().join("from_env").exists());

    let bare = write_config(tmp.path(), "d.cfg", "n_max = 60\nsuites.parametrix = false\n");
    let o = Command::new(env!("CARGO_BIN_EXE_genjacobi"))
        .args(["run", &bare])
        .current_dir(tmp.path())
        .env("GENJACOBI_OUT", tmp.path().join("from_env"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("from_env/summary.txt").is_file());
}

#[test]
fn verify_parametrix_prints_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "p.cfg", "gamma = 1.3\nx0 = 0.3\nc2 = 2\n");
    let o = genjacobi(&["verify-parametrix", &cfg], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,location,residual,tolerance,pass,gating"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.iter().filter(|l| l.starts_with("det,") || l.starts_with("jump,")).count(), 48);
    assert!(rows.iter().any(|l| l.starts_with("cyclic_identity,") && l.ends_with(",false,false")));
    assert!(rows.iter().any(|l| l.starts_with("cyclic_monodromy,") && l.ends_with(",true,true")));
}

#[test]
fn bad_config_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, text) in [("unknown.cfg", "colour = red\n"), ("range.cfg", "alpha = -1.5\n"), ("dup.cfg", "x0 = 0.1\nx0 = 0.2\n")] {
        let cfg = write_config(tmp.path(), name, text);
        let o = genjacobi(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()], tmp.path());
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
    let o = genjacobi(&["run", tmp.path().join("missing.cfg").to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let o = genjacobi(&["frobnicate"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}
