#![allow(dead_code)]

use std::path::{Path, PathBuf};

use mderobust::harness::io::write_png_rgb;
use mderobust::harness::{read_wide_table, WideTable};
use mderobust::synth::scene_corpus;

pub fn data_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn fixture(name: &str) -> WideTable {
    let f = std::fs::File::open(data_path(&format!("fixtures/{name}"))).expect("fixture present");
    read_wide_table(f).expect("fixture parses")
}

/// Writes `n` synthetic scenes as `scene_XX.png` under `dir`.
pub fn write_scenes(dir: &Path, n: usize, w: usize, h: usize, seed: u64) -> Vec<String> {
    scene_corpus(n, w, h, seed)
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let rel = format!("scene_{i:02}.png");
            write_png_rgb(&dir.join(&rel), img).unwrap();
            rel
        })
        .collect()
}

/// Prints one verdict line and returns `ok`.
/// Written to the real stdout so the line shows even when output is captured.
pub fn verdict(name: &str, ok: bool, detail: &str) -> bool {
    use std::io::Write;
    let line = format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    ok
}
