//! Measured noise strength against the table value on a flat mid-grey frame.

use mderobust::corruptions::{apply_corruption, CorruptionKind, CorruptionSpec, SeverityTable};
use mderobust::imagecore::ImageBuffer;

pub fn measured_sigma(kind: CorruptionKind, severity: u8) -> f64 {
    let flat = ImageBuffer::filled(256, 256, 0.5);
    let out = apply_corruption(&flat, &CorruptionSpec::new(kind, severity, 99), &SeverityTable::default()).unwrap();
    out.std_dev()
}

pub fn run_example() {
    let table = SeverityTable::default();
    for sev in 1..=5u8 {
        let nominal = table.level(CorruptionKind::GaussianNoise, sev).unwrap().get("sigma");
        println!(
            "level {sev}: gaussian sigma {nominal:.3} measured {:.3}   shot {:.3}   impulse {:.3}",
            measured_sigma(CorruptionKind::GaussianNoise, sev),
            measured_sigma(CorruptionKind::ShotNoise, sev),
            measured_sigma(CorruptionKind::ImpulseNoise, sev),
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
