use std::fs;
use std::path::Path;
use std::process::Command;

fn fracinv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracinv"))
}

fn write_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    let text = format!(
        "# small run\norders = [0.3, 1.5]\nH = 0.5\nsource = example1\nN = 24\nM = 16\nP = 40\nN_m = 4\nN_omega = 10\nW = 3pi\n{extra}"
    );
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn every_subcommand_writes_its_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = dir.path().join("out");
    for (cmd, files) in [
        ("simulate", vec!["ensemble.csv", "ensemble.meta"]),
        ("r-omega", vec!["r_omega.csv"]),
        ("fbm-gen", vec!["fbm.csv"]),
        ("reconstruct", vec!["recon.csv", "fhat.csv", "solver_log.csv", "metrics.txt", "config.txt"]),
    ] {
        let status = fracinv()
            .args([cmd, "--config"])
            .arg(&cfg)
            .args(["--seed", "5", "--output"])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success(), "{cmd}: {}", String::from_utf8_lossy(&status.stderr));
        for f in files {
            assert!(out.join(f).is_file(), "{cmd} did not write {f}");
        }
    }
    let recon = fs::read_to_string(out.join("recon.csv")).unwrap();
    assert!(recon.starts_with("t,f_true_abs,f_recon_abs"));
    assert_eq!(recon.lines().count(), 26);
    let meta = fs::read_to_string(out.join("ensemble.meta")).unwrap();
    assert!(meta.contains("seed = 5"));
}

#[test]
fn same_seed_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let st = fracinv().arg("simulate").arg("--config").arg(&cfg).arg("--output").arg(&out).status().unwrap();
        assert!(st.success());
        fs::read(out.join("ensemble.csv")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn bad_config_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bogus = 1\n");
    let out = fracinv().arg("simulate").arg("--config").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus"), "{err}");

    let cfg = write_config(dir.path(), "");
    fs::write(&cfg, fs::read_to_string(&cfg).unwrap().replace("example1", "./missing.csv")).unwrap();
    let out = fracinv()
        .arg("simulate")
        .arg("--config")
        .arg(&cfg)
        .arg("--output")
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("configuration:"), "{err}");
}
