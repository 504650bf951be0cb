//! Scoring a prediction under the three protocols.

use mderobust::depthmetrics::{compute_scores, DepthMap, EvalProtocol};
use mderobust::synth::ground_plane_depth;

pub fn run_example() {
    let gt = DepthMap::new(2, 2, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
    let pred = DepthMap::new(2, 2, vec![1.1, 1.8, 4.4, 8.0]).unwrap();
    let s = compute_scores(&pred, &gt, &EvalProtocol::unconstrained()).unwrap();
    println!("four pixels: abs_rel {:.4} d1 {:.3} dee {:.4}", s.abs_rel, s.d1, s.dee);

    // outdoor guess is right only up to scale; indoor guess is metric
    let (w, h) = (256, 80);
    let street = DepthMap::new(w, h, ground_plane_depth(w, h, 80.0)).unwrap();
    let room = DepthMap::new(w, h, ground_plane_depth(w, h, 10.0)).unwrap();
    let warp = |t: &DepthMap, k: f64, far: f64| {
        DepthMap::new(w, h, t.values().iter().map(|&d| k * d * (1.0 + d / far)).collect()).unwrap()
    };
    for (name, proto, truth, guess) in [
        ("kitti", EvalProtocol::kitti(), &street, warp(&street, 0.3, 400.0)),
        ("nyu", EvalProtocol::nyu(), &room, warp(&room, 1.0, 50.0)),
        ("none", EvalProtocol::unconstrained(), &street, warp(&street, 0.3, 400.0)),
    ] {
        let s = compute_scores(&guess, truth, &proto).unwrap();
        println!("{name:<5} abs_rel {:.4} d1 {:.3} rmse {:.3} dee {:.4}", s.abs_rel, s.d1, s.rmse, s.dee);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
