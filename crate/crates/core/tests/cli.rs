//! End-to-end runs of the `vulnmap` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use vulnmap::factors::{DEFAULT_MIN_AREA, DEFAULT_RADII};
use vulnmap::io::{read_ascii_grid, render_ppm, RunConfig};
use vulnmap::scoring::{build_vulnerability_map, WeightConfig};
use vulnmap::validation::{validate_sites, ValidationReport};

fn vulnmap(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vulnmap"))
        .args(args)
        .output()
        .unwrap()
}

fn arg(s: &str) -> &Path {
    Path::new(s)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A synthetic scene on disk; returns the temp dir and the run config path.
fn scene(seed: &str) -> (TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("scene");
    let out = vulnmap(&[arg("synth"), arg("--seed"), arg(seed), arg("--out"), &dir]);
    assert!(out.status.success(), "{}", stderr(&out));
    (tmp, dir.join("run.json"))
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = match std::fs::read_dir(dir) {
        Ok(entries) => entries
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect(),
        Err(_) => return vec![],
    };
    names.sort();
    names
}

#[test]
fn score_writes_all_outputs() {
    let (tmp, cfg) = scene("7");
    let out_dir = tmp.path().join("out");
    let out = vulnmap(&[arg("score"), arg("--config"), &cfg, arg("--out"), &out_dir]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        listing(&out_dir),
        [
            "class.asc",
            "manifest.json",
            "score.asc",
            "vulnerability.ppm"
        ]
    );

    let (config, base) = RunConfig::load(&cfg).unwrap();
    let inputs = config.load_inputs(&base).unwrap();
    let map = build_vulnerability_map(
        &inputs.dem,
        &inputs.features,
        &WeightConfig::default(),
        &DEFAULT_RADII,
        DEFAULT_MIN_AREA,
    )
    .unwrap();
    assert_eq!(
        read_ascii_grid(&out_dir.join("score.asc")).unwrap(),
        map.scores
    );
    assert_eq!(
        read_ascii_grid(&out_dir.join("class.asc")).unwrap(),
        map.classes
    );

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    for name in ["score.asc", "class.asc", "vulnerability.ppm"] {
        let hex = manifest["outputs"][name].as_str().unwrap();
        assert_eq!(hex.len(), 64, "{name}");
    }
}

#[test]
fn missing_dem_key_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"layers": [{"path": "b.geojson", "role": "builtup"}]}"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = vulnmap(&[arg("score"), arg("--config"), &cfg, arg("--out"), &out_dir]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dem"), "{}", stderr(&out));
    assert!(listing(&out_dir).is_empty());
}

#[test]
fn unknown_role_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"dem": "dem.asc", "layers": [{"path": "b.geojson", "role": "quarry"}]}"#,
    )
    .unwrap();
    let out = vulnmap(&[
        arg("score"),
        arg("--config"),
        &cfg,
        arg("--out"),
        tmp.path(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("quarry"), "{}", stderr(&out));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = vulnmap(&[arg("score"), arg("--bogus")]);
    assert_eq!(out.status.code(), Some(2));
    let out = vulnmap(&[arg("frobnicate")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_dem_is_a_data_error_and_writes_nothing() {
    let (tmp, cfg) = scene("11");
    let dem = cfg.with_file_name("dem.asc");
    let text = std::fs::read_to_string(&dem).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[8] = "1 2 not-a-number";
    std::fs::write(&dem, lines.join("\n")).unwrap();

    let out_dir = tmp.path().join("out");
    let out = vulnmap(&[arg("score"), arg("--config"), &cfg, arg("--out"), &out_dir]);
    assert_eq!(out.status.code(), Some(3));
    let msg = stderr(&out);
    assert!(
        msg.contains("dem.asc") && msg.contains("not-a-number"),
        "{msg}"
    );
    assert!(listing(&out_dir).is_empty());
}

#[test]
fn missing_layer_file_is_a_data_error() {
    let (tmp, cfg) = scene("12");
    std::fs::remove_file(cfg.with_file_name("pasture.geojson")).unwrap();
    let out_dir = tmp.path().join("out");
    let out = vulnmap(&[arg("score"), arg("--config"), &cfg, arg("--out"), &out_dir]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("pasture.geojson"), "{}", stderr(&out));
    assert!(listing(&out_dir).is_empty());
}

#[test]
fn validate_matches_library_report() {
    let (tmp, cfg) = scene("5");
    let report_path = tmp.path().join("report.json");
    let out = vulnmap(&[
        arg("validate"),
        arg("--config"),
        &cfg,
        arg("--out"),
        &report_path,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let written: ValidationReport =
        serde_json::from_slice(&std::fs::read(&report_path).unwrap()).unwrap();

    let (config, base) = RunConfig::load(&cfg).unwrap();
    let inputs = config.load_inputs(&base).unwrap();
    let map = build_vulnerability_map(
        &inputs.dem,
        &inputs.features,
        &config.weights,
        &config.radii,
        config.min_area,
    )
    .unwrap();
    assert_eq!(written, validate_sites(&inputs.sites, &map));
    assert_eq!(written.total, 20);
    assert_eq!(written.outside_buffer, 3);
}

#[test]
fn render_reproduces_score_image() {
    let (tmp, cfg) = scene("9");
    let out_dir = tmp.path().join("out");
    assert!(
        vulnmap(&[arg("score"), arg("--config"), &cfg, arg("--out"), &out_dir])
            .status
            .success()
    );
    let image = tmp.path().join("again.ppm");
    let out = vulnmap(&[
        arg("render"),
        arg("--classes"),
        &out_dir.join("class.asc"),
        arg("--out"),
        &image,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let bytes = std::fs::read(&image).unwrap();
    assert_eq!(
        bytes,
        std::fs::read(out_dir.join("vulnerability.ppm")).unwrap()
    );
    let classes = read_ascii_grid(&out_dir.join("class.asc")).unwrap();
    assert_eq!(bytes, render_ppm(&classes).unwrap());
    assert!(bytes.starts_with(b"P6\n"));
}

#[test]
fn score_falls_back_to_configured_output_dir() {
    let (_tmp, cfg) = scene("3");
    let mut config: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&cfg).unwrap()).unwrap();
    config["output_dir"] = "results".into();
    std::fs::write(&cfg, serde_json::to_vec(&config).unwrap()).unwrap();
    let out = vulnmap(&[arg("score"), arg("--config"), &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(listing(&cfg.with_file_name("results")).len(), 4);
}
