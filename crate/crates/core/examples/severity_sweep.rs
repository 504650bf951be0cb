//! Mean PSNR against the clean frame for every kind and level over a small
//! synthetic corpus. PSNR should fall as severity rises.

use mderobust::corruptions::{apply_corruption, CorruptionKind, CorruptionSpec, SeverityTable};
use mderobust::imagecore::{derive_seed, psnr};
use mderobust::synth::scene_corpus;
use rayon::prelude::*;

pub fn sweep(images: usize, w: usize, h: usize) -> Vec<(CorruptionKind, Vec<f64>)> {
    let corpus = scene_corpus(images, w, h, 2024);
    let table = SeverityTable::default();
    CorruptionKind::ALL
        .par_iter()
        .map(|&kind| {
            let curve = (1..=5u8)
                .map(|level| {
                    let total: f64 = corpus
                        .iter()
                        .enumerate()
                        .map(|(i, img)| {
                            let seed = derive_seed(7, &format!("scene_{i}.png"), kind, level);
                            let out = apply_corruption(img, &CorruptionSpec::new(kind, level, seed), &table)
                                .expect("corruption runs")
                                .quantized_8bit();
                            psnr(img, &out)
                        })
                        .sum();
                    total / corpus.len() as f64
                })
                .collect();
            (kind, curve)
        })
        .collect()
}

pub fn run_example() {
    for (kind, curve) in sweep(20, 160, 64) {
        let cells: Vec<String> = curve.iter().map(|p| format!("{p:6.2}")).collect();
        let falling = curve.windows(2).all(|w| w[1] < w[0]);
        println!("{:<18} {}  {}", kind.name(), cells.join(" "), if falling { "ok" } else { "NOT MONOTONE" });
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
