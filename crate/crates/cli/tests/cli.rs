use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn aqm(args: &[&str]) -> Output {
    aqm_with_threads(args, "0")
}

fn aqm_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqm"))
        .args(args)
        .env("AQM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn gen_golden_4k_succeeds() {
    let out = aqm(&["gen", "--preset", "4k", "--kind", "intra", "--golden"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("16,16,16,16,16,17,18,18\n"));
    assert!(stdout(&out).ends_with("18,18,19,20,21,22,23,23\n"));
}

#[test]
fn gen_golden_defaults_for_both_kinds() {
    for kind in ["intra", "inter"] {
        let out = aqm(&["gen", "--kind", kind, "--golden"]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", stderr(&out));
    }
    let intra = stdout(&aqm(&["gen"]));
    assert!(intra.starts_with("16,16,16,16,17,18,21,24\n"), "{intra}");
    assert!(intra.trim_end().ends_with(",115"));
}

#[test]
fn golden_mismatch_exits_with_two() {
    assert_eq!(aqm(&["fwm", "--golden"]).status.code(), Some(0));
    let out = aqm(&["fwm", "--s", "0.5", "--golden"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("golden mismatch"));
}

#[test]
fn golden_without_reference_table_is_a_usage_error() {
    let out = aqm(&["gen", "--geometry", "3840x2160", "--max-geometry", "3840x2160", "--golden"]);
    assert_eq!(out.status.code(), Some(1));
    let out = aqm(&["gen", "--geometry", "3840x2160", "--size", "16", "--golden"]);
    assert_eq!(out.status.code(), Some(0), "golden compares the 8×8 source matrix");
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["gen", "--geometry", "0x0"],
        vec!["gen", "--preset", "nope"],
        vec!["gen", "--size", "12"],
        vec!["simulate", "--layers", "el2,bl"],
        vec!["simulate", "--qps", "60"],
        vec!["frobnicate"],
    ] {
        let out = aqm(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
    let out = aqm_with_threads(&["gen"], "many");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_with_zero() {
    assert_eq!(aqm(&["--help"]).status.code(), Some(0));
    assert_eq!(aqm(&["--version"]).status.code(), Some(0));
}

#[test]
fn gen_max_preset_is_flat() {
    let out = aqm(&["gen", "--preset", "max"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().all(|l| l == "16,16,16,16,16,16,16,16"));
}

#[test]
fn gen_writes_matrices_and_manifest() {
    let dir = TempDir::new().unwrap();
    let out_dir = path(&dir, "gen");
    let out = aqm(&["gen", "--preset", "8k", "--format", "json", "--size", "32", "--output", &out_dir]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let qm: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("gen/qm.json")).unwrap()).unwrap();
    assert_eq!(qm["n"], 32);
    assert_eq!(qm["matrix"].as_array().unwrap().len(), 32);
    let fwm: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("gen/fwm.json")).unwrap()).unwrap();
    assert_eq!(fwm["n"], 8);
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("gen/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"]["subcommand"], "gen");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn fwm_with_custom_constants() {
    let default = stdout(&aqm(&["fwm"]));
    assert_eq!(default.lines().count(), 8);
    assert!(default.starts_with("1,1,1,1,0.9598"));
    let coarse = stdout(&aqm(&["fwm", "--n", "4"]));
    assert_eq!(coarse.lines().count(), 4);
    let out = aqm(&["fwm", "--s", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_row_counts() {
    let full = aqm(&["simulate", "--width", "192", "--height", "108"]);
    assert_eq!(full.status.code(), Some(0), "{}", stderr(&full));
    let text = stdout(&full);
    assert_eq!(text.lines().next(), Some("layer,label,qp,qm_source,psnr_db,rate_bits"));
    assert_eq!(text.lines().count(), 1 + 2 * 12);
    let bl = stdout(&aqm(&["simulate", "--layers", "bl", "--qm-sources", "adaptive", "--width", "192", "--height", "108"]));
    assert_eq!(bl.lines().count(), 1 + 4);
}

#[test]
fn simulate_geometry_override() {
    let base = ["simulate", "--layers", "bl", "--qm-sources", "adaptive", "--width", "192", "--height", "108"];
    let hd = stdout(&aqm(&base));
    let mut flat = base.to_vec();
    flat.extend(["--geometries", "max"]);
    let max = stdout(&aqm(&flat));
    let mut explicit = base.to_vec();
    explicit.extend(["--geometries", "1280x720"]);
    assert_eq!(stdout(&aqm(&explicit)), hd);
    assert_ne!(max, hd);
    let mut wrong = base.to_vec();
    wrong.extend(["--geometries", "hd,4k"]);
    assert_eq!(aqm(&wrong).status.code(), Some(1));
}

#[test]
fn simulate_is_deterministic_across_workers() {
    let dir = TempDir::new().unwrap();
    let mut reports = Vec::new();
    for (i, threads) in ["1", "2", "8", "1"].iter().enumerate() {
        let file = path(&dir, &format!("run{i}.csv"));
        let out = aqm_with_threads(&["simulate", "--corpus", "noise", "--seed", "7", "--output", &file], threads);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        reports.push(fs::read(&file).unwrap());
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn replay_reproduces_outputs() {
    let dir = TempDir::new().unwrap();
    let out_dir = path(&dir, "sweep");
    let out = aqm(&["simulate", "--corpus", "all", "--width", "192", "--height", "108", "--output", &out_dir]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let sweep = dir.path().join("sweep");
    let before: Vec<(String, Vec<u8>)> = ["zone-plate.csv", "gradient.csv", "noise.csv", "checkerboard.csv", "manifest.json"]
        .iter()
        .map(|n| (n.to_string(), fs::read(sweep.join(n)).unwrap()))
        .collect();
    let manifest = dir.path().join("saved.json");
    fs::copy(sweep.join("manifest.json"), &manifest).unwrap();
    fs::remove_dir_all(&sweep).unwrap();

    let out = aqm(&["replay", &manifest.display().to_string()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for (name, bytes) in before {
        assert_eq!(fs::read(sweep.join(&name)).unwrap(), bytes, "{name}");
    }
}

#[test]
fn pack_unpack_round_trip() {
    let dir = TempDir::new().unwrap();
    let (packed, json, repacked) = (path(&dir, "a.aqms"), path(&dir, "a.json"), path(&dir, "b.aqms"));
    assert_eq!(aqm(&["pack", "--presets", "hd,4k,8k", "--output", &packed]).status.code(), Some(0));
    assert_eq!(aqm(&["unpack", "--input", &packed, "--output", &json]).status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_slice(&fs::read(&json).unwrap()).unwrap();
    assert_eq!(payload["layers"].as_array().unwrap().len(), 3);
    assert_eq!(payload["layers"][0]["lists"][1]["kind"], "inter");
    assert_eq!(aqm(&["pack", "--input", &json, "--output", &repacked]).status.code(), Some(0));
    assert_eq!(fs::read(&packed).unwrap(), fs::read(&repacked).unwrap());
    let unpacked_again = stdout(&aqm(&["unpack", "--input", &repacked]));
    assert_eq!(unpacked_again.as_bytes(), fs::read(&json).unwrap().as_slice());
    assert!(Path::new(&format!("{packed}.manifest.json")).exists());
}

#[test]
fn unpack_rejects_bad_containers() {
    let dir = TempDir::new().unwrap();
    let packed = path(&dir, "a.aqms");
    aqm(&["pack", "--presets", "hd", "--output", &packed]);
    let bytes = fs::read(&packed).unwrap();

    let truncated = path(&dir, "short.aqms");
    fs::write(&truncated, &bytes[..bytes.len() - 2]).unwrap();
    let out = aqm(&["unpack", "--input", &truncated]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("parse error"), "{}", stderr(&out));

    let mut wrong = bytes.clone();
    wrong[..4].copy_from_slice(b"ABCD");
    let bad_magic = path(&dir, "magic.aqms");
    fs::write(&bad_magic, wrong).unwrap();
    let out = aqm(&["unpack", "--input", &bad_magic]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("AQMS"), "{}", stderr(&out));
}

#[test]
fn pack_rejects_malformed_json() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "bad.json");
    fs::write(&input, r#"{"layers":[{"lists":[{"kind":"intra","matrix":[[0,1],[1,1]]}]}]}"#).unwrap();
    let out = aqm(&["pack", "--input", &input, "--output", &path(&dir, "x.aqms")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bdrate_reports_two_decimals_and_plot_files() {
    let dir = TempDir::new().unwrap();
    let report = path(&dir, "sweep.csv");
    let out = aqm(&["simulate", "--width", "384", "--height", "216", "--output", &report]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let plots = path(&dir, "plots");
    let out = aqm(&[
        "bdrate", "--anchor", &report, "--anchor-source", "default", "--test-source", "adaptive", "--label", "EL2",
        "--plot-dir", &plots,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let line = stdout(&out);
    let value = line.trim().strip_prefix("EL2: ").and_then(|v| v.strip_suffix('%')).expect("EL2: x.xx%");
    assert_eq!(value.split('.').nth(1).map(str::len), Some(2), "{line}");
    let data = fs::read_to_string(dir.path().join("plots/el2_anchor.dat")).unwrap();
    assert_eq!(data.lines().count(), 5);

    let same = aqm(&["bdrate", "--anchor", &report, "--anchor-source", "adaptive", "--test-source", "adaptive"]);
    assert!(stdout(&same).lines().all(|l| l.ends_with(" 0.00%")), "{}", stdout(&same));

    let ambiguous = aqm(&["bdrate", "--anchor", &report]);
    assert_eq!(ambiguous.status.code(), Some(1));
}
