use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn marshak(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marshak"))
        .args(["--out", dir.to_str().unwrap()])
        .args(args)
        .env_remove("MARSHAK_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn roots_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = marshak(dir.path(), &["roots", "-n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
    let csv = fs::read_to_string(dir.path().join("roots_slab.csv")).unwrap();
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 5);
    let beta1: f64 = body[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((beta1 - 1.22826).abs() < 1e-4, "{beta1}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["analytic", "--geometry", "shell", "--points", "11", "--taus", "0.1,1"];
    assert!(marshak(a.path(), &args).status.success());
    assert!(marshak(b.path(), &args).status.success());
    let read = |d: &Path| fs::read(d.join("analytic_shell.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn json_format_parses() {
    let dir = tempfile::tempdir().unwrap();
    let out = marshak(dir.path(), &["--format", "json", "currents"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let name = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    assert_eq!(name.extension().unwrap(), "json");
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&name).unwrap()).unwrap();
    assert!(doc["metadata"].is_object());
    assert!(!doc["rows"].as_array().unwrap().is_empty());
}

#[test]
fn failed_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = marshak(dir.path(), &["compare", "--probes", "0.01", "--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    assert!(dir.path().join("compare_slab.csv").exists());
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["analytic", "--b=-1"][..], &["roots", "--eps", "-0.5"], &["nonsense"]] {
        let out = marshak(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_marshak"))
        .args(["roots", "-n", "2"])
        .env("MARSHAK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("roots_slab.csv").exists());
}
