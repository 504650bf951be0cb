//! Drives the `mderobust` binary the way scripts and the Python client do.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{data_path, write_scenes};
use mderobust::depthmetrics::DepthMap;
use mderobust::harness::io::write_depth_png16;
use mderobust::harness::{DatasetManifest, ReportDocument};
use mderobust::synth::ground_plane_depth;

fn mderobust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mderobust"))
        .args(args)
        .env_remove("MDEROBUST_CONFIG")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn corrupt_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean");
    write_scenes(&clean, 3, 48, 24, 2);
    let out = dir.path().join("c");
    let o = mderobust(&["corrupt", "--in", s(&clean), "--out", s(&out), "--kinds", "fog,snow", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = DatasetManifest::load(&out.join("manifest.json")).unwrap();
    assert_eq!(m.entries.len(), 3 * 2 * 5);

    let o = mderobust(&["verify", "--manifest", s(&out.join("manifest.json")), "--sample", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("checked 30 of 30 entries, 0 mismatched"));

    // tamper with one output
    let victim = out.join(&m.entries[4].output_path);
    let flipped = mderobust::harness::io::read_rgb(&out.join(&m.entries[5].output_path)).unwrap();
    mderobust::harness::io::write_png_rgb(&victim, &flipped).unwrap();
    let o = mderobust(&["verify", "--manifest", s(&out.join("manifest.json")), "--sample", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(&m.entries[4].output_path));
}

#[test]
fn dry_run_counts_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean");
    write_scenes(&clean, 2, 16, 16, 2);
    let out = dir.path().join("c");
    let o = mderobust(&["corrupt", "--in", s(&clean), "--out", s(&out), "--profile", "indoor-4", "--dry-run"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("120 entries (2 images x 15 kinds x 4 levels)"));
    assert!(!out.exists());
}

#[test]
fn unreadable_input_is_a_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean");
    write_scenes(&clean, 2, 32, 16, 2);
    std::fs::write(clean.join("broken.png"), b"not a png").unwrap();
    let out = dir.path().join("c");
    let o = mderobust(&["corrupt", "--in", s(&clean), "--out", s(&out), "--kinds", "contrast", "--severities", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.png"));
    assert!(out.join("contrast/1/scene_00.png").exists());
}

#[test]
fn report_on_the_monovit_row() {
    let cells = data_path("fixtures/kitti_c_dee.csv");
    let o = mderobust(&["report", "--cells", s(&cells), "--model", "MonoViT"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("mCE 79.3"), "{err}");
    let doc = ReportDocument::from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.report.model_id, "MonoViT");
    assert_eq!(doc.to_json().unwrap(), stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let o = mderobust(&["report", "--cells", s(&cells), "--model", "MonoViT", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["report.json", "dee_matrix.csv", "ce_rr.csv", "categories.csv", "severity_curves.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let ce_rr = std::fs::read_to_string(dir.path().join("ce_rr.csv")).unwrap();
    assert_eq!(ce_rr.lines().count(), 19);
}

#[test]
fn conflicting_profile_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "profile = \"outdoor-5\"\n").unwrap();
    let cells = data_path("fixtures/nyudepth2_c_dee.csv");
    let o = mderobust(&["--config", s(&cfg), "report", "--cells", s(&cells), "--model", "BTS-R50", "--profile", "indoor-4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("profile"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(mderobust(&["corrupt", "--bogus"]).status.code(), Some(1));
    assert_eq!(mderobust(&["histogram", "--in", "/nonexistent/dir"]).status.code(), Some(1));
    assert_eq!(mderobust(&["--help"]).status.code(), Some(0));
}

#[test]
fn evaluate_names_the_missing_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let gt = DepthMap::new(16, 8, ground_plane_depth(16, 8, 80.0)).unwrap();
    for rel in ["a.png", "b.png"] {
        write_depth_png16(&dir.path().join("gt").join(rel), &gt, 256.0).unwrap();
    }
    write_depth_png16(&dir.path().join("pred/clean/a.png"), &gt, 256.0).unwrap();
    let (pred, gt_dir) = (dir.path().join("pred"), dir.path().join("gt"));
    let args = ["evaluate", "--pred", s(&pred), "--gt", s(&gt_dir), "--model", "m"];
    let o = mderobust(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("b.png"), "{}", stderr(&o));

    write_depth_png16(&dir.path().join("pred/clean/b.png"), &gt, 256.0).unwrap();
    let o = mderobust(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "model,kind,severity,dee\nm,clean,0,0\n");
}

#[test]
fn histogram_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    write_scenes(dir.path(), 2, 20, 10, 5);
    let o = mderobust(&["histogram", "--in", s(dir.path()), "--bins", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bin,lower,upper,r,g,b");
    assert_eq!(lines.len(), 17);
    let red: u64 = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(red, 2 * 20 * 10);
}
