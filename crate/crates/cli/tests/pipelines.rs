use std::path::{Path, PathBuf};
use std::process::Command;

use cryowire_cli::{run_pipeline, Pipeline, RunConfig};
use cryowire_core::presets::synthetic_absorber_rows;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config(name: &str, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::from_path(&workspace().join("configs").join(name)).unwrap();
    cfg.out_dir = Some(out.to_path_buf());
    cfg
}

fn read_csv(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn field(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

#[test]
fn default_chain_summary() {
    let dir = tempfile::tempdir().unwrap();
    let m = run_pipeline(&config("flux_default.toml", dir.path())).unwrap();
    assert_eq!(m.pipeline, Pipeline::Flux);
    let rows = read_csv(&dir.path().join("summary.csv"));
    let total = |sc: &str| {
        rows.iter()
            .find(|r| &r[0] == sc && &r[1] == "total")
            .map(|r| field(r, 4))
            .unwrap()
    };
    // Same chain as the core flux tests.
    let active = total("attenuators_active");
    assert!((active - 1823.8).abs() < 1.0, "{active}");
    let bypassed = total("attenuators_bypassed");
    assert!((bypassed / 8.407e7 - 1.0).abs() < 1e-3, "{bypassed}");

    let spectrum = read_csv(&dir.path().join("flux_attenuators_active.csv"));
    assert!(spectrum.iter().any(|r| &r[1] == "TEM"));
    assert!(spectrum.iter().any(|r| &r[1] == "TE11"));
}

#[test]
fn nrw_recovers_synthetic_truth() {
    let dir = tempfile::tempdir().unwrap();
    let m = run_pipeline(&config("nrw_synthetic.toml", dir.path())).unwrap();
    assert_eq!(m.parameters["selected_branches"], "2+3");
    assert_eq!(m.inputs.len(), 2);
    let rows = read_csv(&dir.path().join("material.csv"));
    let truth = synthetic_absorber_rows();
    let mut checked = 0;
    for r in &rows {
        let f = field(r, 0);
        if let Some(t) = truth.iter().find(|t| (t.f_hz - f).abs() < 1.0) {
            for (i, v) in [t.eps_p, t.eps_pp, t.mu_p, t.mu_pp].into_iter().enumerate() {
                let got = field(r, i + 1);
                assert!(((got - v) / v).abs() < 1e-9, "f = {f}, column {i}: {got} vs {v}");
            }
            assert_eq!(&r[7], "2+3");
            checked += 1;
        }
    }
    assert_eq!(checked, truth.len());
}

#[test]
fn filter_residual_is_negligible() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config("filter_synthetic.toml", dir.path())).unwrap();
    let rows = read_csv(&dir.path().join("residual_summary.csv"));
    for r in &rows {
        assert!(field(r, 3) > 1e3);
        assert!(field(r, 4) < 1e-6, "{}: {}", &r[0], &r[4]);
    }
    let att = read_csv(&dir.path().join("filter_attenuation.csv"));
    assert!(att.iter().all(|r| field(r, 5) > 150.0));
}

#[test]
fn modes_cutoffs_written() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config("modes_ut086.toml", dir.path())).unwrap();
    let rows = read_csv(&dir.path().join("cutoffs.csv"));
    let te11 = rows.iter().find(|r| &r[1] == "TE11").unwrap();
    assert!((field(te11, 6) / 62.5e9 - 1.0).abs() < 5e-3);
    let tm01 = rows.iter().find(|r| &r[1] == "TM01").unwrap();
    assert!((field(tm01, 6) / 176.4e9 - 1.0).abs() < 5e-3);
}

#[test]
fn empty_band_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("flux_default.toml", dir.path());
    cfg.flux.band_ghz = [100.0, 100.0];
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.category(), "config");
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for name in ["flux_default.toml", "nrw_synthetic.toml", "filter_synthetic.toml"] {
        let ma = run_pipeline(&config(name, a.path())).unwrap();
        let mb = run_pipeline(&config(name, b.path())).unwrap();
        assert_eq!(ma, mb);
        for f in ma.outputs.iter().map(|o| &o.path).chain([&"manifest.json".to_string()]) {
            let x = std::fs::read(a.path().join(f)).unwrap();
            let y = std::fs::read(b.path().join(f)).unwrap();
            assert!(x == y, "{name}: {f} differs");
        }
    }
}

#[test]
fn binary_reports_errors_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cryowire"))
        .args(["flux", "--band-ghz", "110", "82", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "config");
    assert!(v["message"].as_str().unwrap().contains("band"));

    let out = Command::new(env!("CARGO_BIN_EXE_cryowire"))
        .args(["nrw", "--section", "missing.s2p=2", "--section", "missing2.s2p=3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "config");
}

#[test]
fn binary_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_cryowire"))
        .args(["modes", "--cable", "ut047", "--family", "te", "--max-f-ghz", "300", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let rows = read_csv(&dir.path().join("cutoffs.csv"));
    assert!(rows.iter().all(|r| &r[0] == "ut047" && &r[2] == "TE"));
    assert!(rows.iter().all(|r| field(r, 6) <= 300e9));
    assert!((field(&rows[0], 6) / 111.0e9 - 1.0).abs() < 5e-3);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["pipeline"], "modes");
}
