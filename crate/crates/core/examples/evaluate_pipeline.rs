//! Corrupt, score a toy model that degrades with severity, and write every report file.

use mderobust::corruptions::{CorruptionKind, Profile};
use mderobust::depthmetrics::{DepthMap, EvalProtocol};
use mderobust::harness::io::{write_depth_png16, write_png_rgb};
use mderobust::harness::{
    build_report, evaluate, generate_dataset, shipped_baseline, DepthFormat, EvalTargets, GenerateRequest, GroundTruth,
    PredictionSet,
};
use mderobust::synth::{ground_plane_depth, scene_corpus};

pub fn run_example() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let (w, h) = (96, 32);
    let gt = DepthMap::new(w, h, ground_plane_depth(w, h, 80.0)).unwrap();
    for (i, img) in scene_corpus(3, w, h, 1).iter().enumerate() {
        write_png_rgb(&root.join(format!("clean/{i}.png")), img).unwrap();
        write_depth_png16(&root.join(format!("gt/{i}.png")), &gt, 256.0).unwrap();
    }
    let req = GenerateRequest::new(root.join("clean"), root.join("c"), Profile::Outdoor5, 0);
    let manifest = generate_dataset(&req).unwrap().manifest;

    // stand-in for a network: error grows with level, more for noise
    let fmt = DepthFormat::Pfm;
    let guess = |f: f64| DepthMap::new(w, h, gt.values().iter().map(|&d| if d > 0.0 { d * f } else { 1.0 }).collect()).unwrap();
    for i in 0..3 {
        fmt.write(&root.join(format!("pred/clean/{i}.pfm")), &guess(1.08)).unwrap();
    }
    for e in &manifest.entries {
        let noisy = matches!(e.kind, CorruptionKind::GaussianNoise | CorruptionKind::ShotNoise | CorruptionKind::ImpulseNoise);
        let f = 1.08 + f64::from(e.severity) * if noisy { 0.06 } else { 0.02 };
        let stem = e.relative_path.trim_end_matches(".png");
        fmt.write(&root.join(format!("pred/{}/{}/{stem}.pfm", e.kind.name(), e.severity)), &guess(f)).unwrap();
    }

    let pred = PredictionSet::new("toy", root.join("pred"), fmt);
    let truth = GroundTruth { root: root.join("gt"), format: DepthFormat::Png16 { divisor: 256.0 } };
    let proto = EvalProtocol::new(1e-3, 80.0, mderobust::depthmetrics::Crop::None, false).unwrap();
    let ev = evaluate(&pred, &truth, &EvalTargets::from_manifest(&manifest), &proto, 2).unwrap();
    let clean = ev.clean_dee().unwrap();
    let doc = build_report(&ev.dee_cells(), clean, &shipped_baseline(Profile::Outdoor5), Some(Profile::Outdoor5))
        .unwrap()
        .with_manifest_hash(manifest.content_hash().unwrap())
        .with_protocol(proto);
    let p = &doc.presentation;
    println!("clean DEE {:.3}  mCE {:.1}  mRR {:.1}", p.clean_dee, p.mce, p.mrr);
    for f in doc.write_all(&root.join("report")).unwrap() {
        println!("  {}", f.file_name().unwrap().to_string_lossy());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
