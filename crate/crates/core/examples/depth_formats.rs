//! 16-bit PNG and PFM depth files.

use mderobust::depthmetrics::DepthMap;
use mderobust::harness::DepthFormat;
use mderobust::synth::ground_plane_depth;

pub fn run_example() {
    let dir = tempfile::tempdir().unwrap();
    let outdoor = DepthMap::new(64, 32, ground_plane_depth(64, 32, 80.0)).unwrap();
    let indoor = DepthMap::new(64, 32, ground_plane_depth(64, 32, 10.0)).unwrap();
    // 16 bits at /1000 stop at 65.535 m, so millimetre files only suit indoor ranges
    for (d, fmt) in [
        (&outdoor, DepthFormat::Png16 { divisor: 256.0 }),
        (&indoor, DepthFormat::Png16 { divisor: 1000.0 }),
        (&outdoor, DepthFormat::Pfm),
    ] {
        let path = dir.path().join(format!("depth.{}", fmt.extension()));
        fmt.write(&path, &d).unwrap();
        let back = fmt.read(&path).unwrap();
        let worst = d
            .values()
            .iter()
            .zip(back.values())
            .zip(d.valid())
            .filter(|(_, &ok)| ok)
            .map(|((a, b), _)| (a - b).abs())
            .fold(0.0, f64::max);
        let bytes = std::fs::metadata(&path).unwrap().len();
        println!("{fmt:?}: {bytes} bytes, {} valid, max error {worst:.2e}", back.valid_count());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
