//! Overriding one level of the severity table and saving it as TOML.

use mderobust::corruptions::{apply_corruption, CorruptionKind, CorruptionSpec, SeverityTable};
use mderobust::imagecore::ImageBuffer;

pub fn run_example() {
    let stock = SeverityTable::default();
    let tuned = stock.clone().with_param(CorruptionKind::GaussianNoise, 5, "sigma", 0.45).unwrap();
    let flat = ImageBuffer::filled(128, 128, 0.5);
    let spec = CorruptionSpec::new(CorruptionKind::GaussianNoise, 5, 3);
    for (name, t) in [("stock", &stock), ("tuned", &tuned)] {
        let sd = apply_corruption(&flat, &spec, t).unwrap().std_dev();
        println!("{name}: hash {:#018x}, level-5 noise std {sd:.3}", t.content_hash());
    }
    let err = stock.clone().with_param(CorruptionKind::GaussianNoise, 5, "sigma", 0.2).unwrap_err();
    println!("non-monotone override rejected: {err}");
    let text = tuned.to_toml_string();
    let reread = SeverityTable::from_toml_str(&text).unwrap();
    assert_eq!(reread.content_hash(), tuned.content_hash());
    println!("{} lines of TOML, round-trips", text.lines().count());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
