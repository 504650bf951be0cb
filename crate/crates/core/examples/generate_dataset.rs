//! Build a corrupted copy of a folder, then check a sample of it.

use mderobust::corruptions::{CorruptionContext, CorruptionKind, Profile};
use mderobust::harness::io::write_png_rgb;
use mderobust::harness::{generate_dataset, verify_manifest, GenerateRequest};
use mderobust::synth::scene_corpus;

pub fn run_example() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean");
    for (i, img) in scene_corpus(4, 160, 48, 3).iter().enumerate() {
        write_png_rgb(&clean.join(format!("drive_{}/{i:06}.png", i % 2)), img).unwrap();
    }
    let out = dir.path().join("corrupted");
    let mut req = GenerateRequest::new(&clean, &out, Profile::Outdoor5, 7);
    req.kinds = vec![CorruptionKind::Fog, CorruptionKind::MotionBlur, CorruptionKind::JpegCompress];
    let first = generate_dataset(&req).unwrap();
    let m = &first.manifest;
    println!("{} entries, manifest hash {:#018x}", m.entries.len(), m.content_hash().unwrap());
    for e in m.entries.iter().take(3) {
        println!("  {} -> {} seed {:#018x}", e.relative_path, e.output_path, e.derived_seed);
    }
    let again = generate_dataset(&req).unwrap();
    println!("second run reused {} files", again.reused);
    let v = verify_manifest(m, &clean, &out, 10, &CorruptionContext::default(), 2).unwrap();
    println!("verified {} entries, {} mismatches", v.checked.len(), v.mismatches.len());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
