//! Tool configuration from TOML.

use std::path::Path;

use mderobust::harness::Config;

const TEXT: &str = r#"
profile = "indoor-4"
seed_root = 5
jobs = 2

[protocol]
min_depth = 0.001
max_depth = 10.0
median_scaling = false
crop = { type = "fraction", top = 0.09375, bottom = 0.98125, left = 0.0640625, right = 0.9390625 }

[prediction]
type = "pfm"
"#;

pub fn run_example() {
    let cfg = Config::from_toml_str(TEXT, Path::new(".")).unwrap();
    println!("profile {} with {} levels", cfg.profile, cfg.profile.levels());
    println!("ground truth {:?}, predictions {:?}", cfg.ground_truth, cfg.prediction);
    println!("protocol {:?}", cfg.protocol);
    let b = cfg.baseline().unwrap();
    println!("baseline {} (clean DEE {}) over {} kinds", b.model_id(), b.clean_dee(), b.kinds().len());
    match Config::from_toml_str("profile = \"indoor-4\"\nseeds = 1\n", Path::new(".")) {
        Err(e) => println!("typo rejected: {e}"),
        Ok(_) => println!("typo accepted?"),
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
