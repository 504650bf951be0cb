//! Corrupt one frame with every kind at one level and write the results.

use std::path::Path;

use mderobust::corruptions::{apply_corruption, CorruptionKind, CorruptionSpec, SeverityTable};
use mderobust::harness::io::write_png_rgb;
use mderobust::imagecore::{derive_seed, psnr};
use mderobust::synth::street_scene;

pub fn corrupt_all(out_dir: &Path, severity: u8) -> Vec<(CorruptionKind, f64)> {
    let clean = street_scene(320, 96, 11);
    write_png_rgb(&out_dir.join("clean.png"), &clean).expect("write clean");
    let table = SeverityTable::default();
    CorruptionKind::ALL
        .iter()
        .map(|&kind| {
            let seed = derive_seed(0, "frame.png", kind, severity);
            let out = apply_corruption(&clean, &CorruptionSpec::new(kind, severity, seed), &table).expect("corrupt");
            write_png_rgb(&out_dir.join(format!("{}_{severity}.png", kind.name())), &out).expect("write");
            (kind, psnr(&clean, &out.quantized_8bit()))
        })
        .collect()
}

pub fn run_example() {
    let dir = tempfile::tempdir().expect("temp dir");
    for (kind, p) in corrupt_all(dir.path(), 3) {
        println!("{:<18} {:>6.2} dB", kind.name(), p);
    }
    println!("wrote 19 images to {}", dir.path().display());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
