//! Per-channel intensity histograms before and after a tone change.

use mderobust::corruptions::{apply_corruption, CorruptionKind, CorruptionSpec, SeverityTable};
use mderobust::harness::Histogram;
use mderobust::synth::scene_corpus;

pub fn run_example() {
    let table = SeverityTable::default();
    for kind in [CorruptionKind::Brightness, CorruptionKind::Contrast, CorruptionKind::Dark] {
        let mut before = Histogram::new(32).unwrap();
        let mut after = Histogram::new(32).unwrap();
        for img in scene_corpus(3, 96, 48, 8) {
            before.add(&img);
            after.add(&apply_corruption(&img, &CorruptionSpec::new(kind, 4, 1), &table).unwrap().quantized_8bit());
        }
        println!(
            "{:<11} green variance {:.4} -> {:.4}",
            kind.name(),
            before.variance(1),
            after.variance(1)
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
