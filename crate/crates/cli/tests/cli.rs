use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn magres(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magres")).args(args).arg("--out").arg(out).output().unwrap()
}

fn config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn example(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const SMALL_SWEEP: &str = r#"
[model]
name = "davies"
[grid]
half_width = 8.0
n_cap = 256
[sweep]
h_list = [0.0625, 0.03125, 0.015625, 0.0078125]
distances = [1.0, 2.0, 4.0, 8.0]
"#;

const SHORT_COMPOSITION: &str = "composition_h_list = [0.125, 0.0625, 0.03125]\n";

#[test]
fn reference_file_is_current() {
    let out = Command::new(env!("CARGO_BIN_EXE_magres")).arg("config-reference").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), fs::read_to_string(example("reference.toml")).unwrap());
}

#[test]
fn failing_model_exits_one_with_the_failing_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = magres(&["audit-model", "--config", &example("imag_linear.toml")], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let csv = read(dir.path(), "model_conditions.csv");
    assert!(csv.lines().any(|l| l.starts_with("imag_linear,v2_growth,") && l.ends_with(",false")), "{csv}");
}

#[test]
fn davies_model_and_symbol_audits_pass() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["audit-model", "audit-symbols"] {
        let out = magres(&[cmd], dir.path());
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let csv = read(dir.path(), "symbol_classes.csv");
    assert!(csv.lines().filter(|l| l.starts_with("\"F(z=") || l.starts_with("F(z=")).count() >= 42, "{csv}");
}

#[test]
fn empty_audit_h_list_gives_skipped_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", "[audit]\nh_list = []\n");
    let out = magres(&["audit-weight", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = read(dir.path(), "inequalities.csv");
    for id in ["weight_q", "weight_p", "g_sup", "psi_derivative"] {
        assert!(csv.contains(&format!("{id},,,,,,skipped")), "{id}: {csv}");
    }
    let out = magres(&["audit-symbols", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(read(dir.path(), "symbol_classes.csv").contains("F,1,,,,,,,,skipped"));
}

#[test]
fn z_inside_the_spectrum_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = magres(&["sweep", "--config", &example("inside_spectrum.toml")], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(magres_core::resolvent_lab::PARABOLA_CONDITION), "{err}");
}

#[test]
fn malformed_configuration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in ["[sweep]\nh_list = [0.01, 0.1]\n", "[model]\nname = \"nope\"\n", "not toml ="].iter().enumerate() {
        let cfg = config(dir.path(), &format!("bad{i}.toml"), text);
        let out = magres(&["audit-model", "--config", cfg.to_str().unwrap()], dir.path());
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    let missing = dir.path().join("missing.toml");
    assert_eq!(magres(&["sweep", "--config", missing.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn unwritable_output_directory_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = magres(&["audit-model"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coarse_frame_fails_the_identity_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", &format!("[wick]\ndelta = 1.0\n{SHORT_COMPOSITION}"));
    let out = magres(&["audit-wick", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let csv = read(dir.path(), "wick_identities.csv");
    assert!(csv.lines().nth(2).unwrap().starts_with("frame_identity,") && csv.lines().nth(2).unwrap().ends_with(",false"));
}

#[test]
fn multiplication_symbols_compose_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", &format!("[wick]\nbattery = \"x_only\"\ncomposition_pair = \"x_only\"\n{SHORT_COMPOSITION}"));
    let out = magres(&["audit-wick", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = read(dir.path(), "composition_slopes.csv");
    assert!(csv.lines().any(|l| l.starts_with("noise_floor,") && l.ends_with(",true")), "{csv}");
    assert!(read(dir.path(), "normalization_finding.txt").contains("adopted: pi^(-n)"));
}

#[test]
fn sweep_outputs_are_reproducible_and_stamped() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "c.toml", SMALL_SWEEP);
    let cfg = cfg.to_str().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    assert_eq!(magres(&["sweep", "--config", cfg, "--seed", "42"], &a).status.code(), Some(0));
    assert!(fs::read_dir(a.join("cache")).unwrap().count() > 0);
    let first: Vec<String> = ["sweep.csv", "exponents.csv", "grid_convergence.csv"].iter().map(|f| read(&a, f)).collect();
    // second run reads the cached matrices
    assert_eq!(magres(&["sweep", "--config", cfg, "--seed", "42"], &a).status.code(), Some(0));
    assert_eq!(magres(&["sweep", "--config", cfg, "--seed", "42", "--no-cache"], &b).status.code(), Some(0));
    assert!(!b.join("cache").exists());
    for (i, f) in ["sweep.csv", "exponents.csv", "grid_convergence.csv"].iter().enumerate() {
        assert_eq!(read(&a, f), first[i], "{f}");
        assert_eq!(read(&b, f), first[i], "{f}");
    }
    for f in ["sweep.csv", "exponents.csv", "grid_convergence.csv"] {
        let head = read(&a, f).lines().next().unwrap().to_string();
        assert!(head.starts_with("# config_hash=") && head.ends_with(" seed=42"), "{head}");
    }
    for f in ["sigma_vs_h.svg", "ratio_vs_y.svg"] {
        assert!(read(&a, f).starts_with("<!-- config_hash="), "{f}");
    }
    let sweep = &first[0];
    assert_eq!(sweep.lines().filter(|l| l.starts_with("davies,")).count(), 16);
    assert_eq!(sweep.lines().filter(|l| l.starts_with("# fit,h,")).count(), 4);
    assert_eq!(sweep.lines().filter(|l| l.starts_with("# fit,y,")).count(), 4);
    assert!(sweep.contains("# certification,") && sweep.contains("pass=true"));

    // a different seed changes only the stamp
    assert_eq!(magres(&["sweep", "--config", cfg, "--seed", "7"], &c).status.code(), Some(0));
    let strip = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&read(&c, "sweep.csv")), strip(sweep));
}
