use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wirenoise"))
}

fn reference_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/reference_design.cfg")
}

#[test]
fn design_from_bundled_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "design",
            reference_config().to_str().unwrap(),
            "--reference-constant",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("design.json")).unwrap())
            .unwrap();
    let d = json["result"]["d_min"].as_f64().unwrap();
    assert!((5.3e-6..6.3e-6).contains(&d));
    let sweep = std::fs::read_to_string(dir.path().join("design_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().filter(|l| l.starts_with("sigma")).count(), 10);
}

#[test]
fn malformed_unit_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(reference_config())
        .unwrap()
        .replace("\"3 nm\"", "\"3 furlongs\"");
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, text).unwrap();
    let out = bin()
        .args(["design", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("roughness.sigma") && err.contains("furlongs"),
        "{err}"
    );
}

#[test]
fn strict_mode_fails_on_warning() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(reference_config())
        .unwrap()
        .replace("xi = \"20 nm\"", "xi = \"20 um\"");
    let cfg = dir.path().join("close.cfg");
    std::fs::write(&cfg, text).unwrap();
    let relaxed = bin()
        .args(["design", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(relaxed.status.code(), Some(0));
    let strict = bin()
        .args(["design", cfg.to_str().unwrap(), "--strict"])
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn figure_override_adds_curve_and_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["figure", "3", "--extra", "5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("fig3_manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["overrides"]["extra"][0].as_f64(), Some(5.0));
    for f in manifest["files"].as_array().unwrap() {
        let text = std::fs::read(dir.path().join(f["file"].as_str().unwrap())).unwrap();
        assert_eq!(
            wirenoise::figures::sha256_hex(&text),
            f["sha256"].as_str().unwrap()
        );
    }
}

#[test]
fn figure_seven_carries_asymptote() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["figure", "7", "--points", "9", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("fig7_smallxi_asymptote.csv")).unwrap();
    assert!(text.contains("c=0.274"));
}

#[test]
fn invalid_figure_id_fails() {
    let out = bin().args(["figure", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn synth_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let st = bin()
            .args([
                "synth", "--sigma", "3 nm", "--xi", "20 nm", "--alpha", "0.5", "--n", "2048",
                "--dz", "1 nm", "--seed", "4", "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(st.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn validate_variance_reports_constant() {
    let out = bin()
        .args(["validate", "variance"])
        .env("WIRENOISE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("c(d = y0) = 0.2740"));
}

#[test]
fn bad_thread_count_is_an_error() {
    let out = bin()
        .args(["validate", "specfun"])
        .env("WIRENOISE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn figure_range_override_sets_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["figure", "3", "--range", "0.1,5", "--points", "5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("fig3_ftilde2_d_over_y0_2.csv")).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(
        rows[0].starts_with("0.1,") && rows[4].starts_with("5,"),
        "{rows:?}"
    );
    let bad = bin()
        .args(["figure", "3", "--range", "0.1"])
        .output()
        .unwrap();
    assert!(!bad.status.success());
}
