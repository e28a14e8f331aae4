//! End-to-end checks of the `cmab` binary: reproducibility of artifacts,
//! thread-count invariance, and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::Command;

fn cmab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmab"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path
}

const SECOND_DIFF_CFG: &str = "\
[run]
command = second-diff
alpha = 0.5
t = 0.25
seed = 7
[instance]
n = 1
symmetry = disc
phi = abspow:0.5
f = zero
";

#[test]
fn reruns_and_thread_counts_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SECOND_DIFF_CFG);

    let mut outputs = Vec::new();
    for (label, threads) in [("a", "1"), ("b", "4"), ("c", "1")] {
        let out = tmp.path().join(label);
        let status = cmab()
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .arg("--threads")
            .arg(threads)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0), "run {label} did not pass");
        outputs.push(fs::read(out.join("second_diff.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "threads 1 vs 4 differ");
    assert_eq!(outputs[0], outputs[2], "identical reruns differ");
}

#[test]
fn geometry_check_passes_and_stamps_provenance() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[run]\ncommand = check-geometry\nseed = 11\n[instance]\nn = 2\n",
    );
    let out = tmp.path().join("out");
    let status = cmab()
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = fs::read_to_string(out.join("geometry.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("# cmab "), "missing provenance: {header}");
    assert!(header.contains("config_sha256 = "), "{header}");
    assert!(header.contains("seed = 11"), "{header}");
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[run]\ncommand = check-geometry\nseed = 11\n[instance]\nn = 1\n",
    );
    let out = tmp.path().join("out");
    let status = cmab()
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .arg("--seed")
        .arg("99")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = fs::read_to_string(out.join("geometry.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("seed = 99"));
}

#[test]
fn invalid_alpha_exits_with_usage_code() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[run]\ncommand = verify-c1a\nalpha = 1.5\n[instance]\nn = 1\n",
    );
    let status = cmab().arg("--config").arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn unknown_preset_exits_with_usage_code() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[run]\ncommand = solve\n[instance]\nphi = wavelet:3\n",
    );
    let status = cmab().arg("--config").arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn missing_config_file_exits_with_usage_code() {
    let status = cmab()
        .arg("--config")
        .arg("/nonexistent/cmab.cfg")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}
