//! Diamond-square plasma at two decay rates, the fog texture source.

use mderobust::imagecore::{plasma_fractal, DeterministicRng, Plane};

fn roughness(p: &Plane) -> f64 {
    let mut s = 0.0;
    for y in 0..p.height {
        for x in 1..p.width {
            s += f64::from((p.get(x, y) - p.get(x - 1, y)).abs());
        }
    }
    s / (p.height * (p.width - 1)) as f64
}

pub fn run_example() {
    for decay in [1.5, 2.0, 3.0] {
        let p = plasma_fractal(256, decay, &mut DeterministicRng::new(1)).unwrap();
        let (lo, hi) = p.min_max();
        println!("decay {decay}: range [{lo:.2}, {hi:.2}], mean |dx| {:.4}", roughness(&p));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
