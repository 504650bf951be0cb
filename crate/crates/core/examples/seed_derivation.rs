//! Per-file seeds: the same path, kind and level always give the same stream.

use mderobust::corruptions::CorruptionKind;
use mderobust::imagecore::{derive_seed, DeterministicRng};

pub fn run_example() {
    let s = derive_seed(0, "a/b.png", CorruptionKind::GaussianNoise, 1);
    println!("derive_seed(0, a/b.png, gaussian_noise, 1) = {s:#018x}");
    for kind in [CorruptionKind::Fog, CorruptionKind::Snow] {
        for sev in 1..=3 {
            println!("  {:<6} {sev}  {:#018x}", kind.name(), derive_seed(42, "2011_09_26/0000000005.png", kind, sev));
        }
    }
    let mut rng = DeterministicRng::new(1234567);
    let head: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
    println!("splitmix64(1234567): {head:?}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
