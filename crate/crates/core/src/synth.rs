//! Procedural street-like scenes and matching depth maps for tests and demos.

use crate::imagecore::{gaussian_blur, DeterministicRng, ImageBuffer};

/// A road scene: sky gradient, textured ground below a horizon, and a few
/// blocks standing on the ground. Every sample lies in `[0, 1]`, and the
/// brightest sky pixels reach 1.
pub fn street_scene(w: usize, h: usize, seed: u64) -> ImageBuffer {
    let mut rng = DeterministicRng::new(seed);
    let horizon = h as f64 * rng.uniform(0.35, 0.5);
    let sky = [rng.uniform(0.55, 0.75), rng.uniform(0.7, 0.85), 1.0];
    let ground = [rng.uniform(0.25, 0.4), rng.uniform(0.25, 0.4), rng.uniform(0.25, 0.35)];
    let blocks: Vec<(f64, f64, f64, f64, [f64; 3])> = (0..rng.int_inclusive(3, 6))
        .map(|_| {
            let bw = w as f64 * rng.uniform(0.08, 0.25);
            let bh = h as f64 * rng.uniform(0.2, 0.5);
            let x0 = rng.uniform(0.0, w as f64 - bw);
            let base = horizon + rng.uniform(0.0, 0.35) * (h as f64 - horizon);
            let color = [rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)];
            (x0, base - bh, bw, bh, color)
        })
        .collect();
    let stripe_phase = rng.uniform(0.0, 1.0);
    let grain: Vec<f64> = (0..w * h).map(|_| rng.uniform(-0.06, 0.06)).collect();

    let img = ImageBuffer::from_fn(w, h, |x, y, c| {
        let (xf, yf) = (x as f64, y as f64);
        let mut v = if yf < horizon {
            let t = yf / horizon.max(1.0);
            sky[c] * (1.0 - 0.35 * t) + 0.35 * t * 0.8
        } else {
            let d = (yf - horizon + 1.0) / (h as f64 - horizon);
            let lane = ((xf - w as f64 / 2.0) / (d * w as f64 + 1.0) * 4.0 + stripe_phase).fract().abs();
            let marking = if lane < 0.05 && ((1.0 / d) * 0.8).fract() < 0.5 { 0.5 } else { 0.0 };
            ground[c] * (0.7 + 0.6 * d) + marking + grain[y * w + x]
        };
        for &(bx, by, bw, bh, color) in &blocks {
            if xf >= bx && xf < bx + bw && yf >= by && yf < by + bh {
                let window = ((xf - bx) / 6.0).fract() < 0.5 && ((yf - by) / 8.0).fract() < 0.4;
                v = color[c] * if window { 0.6 } else { 1.0 } + grain[y * w + x];
            }
        }
        v as f32
    });
    let mut out = gaussian_blur(&img, 0.6).expect("positive sigma");
    // Keep one saturated highlight so every scene spans the full range.
    out.set_pixel(0, 0, [1.0, 1.0, 1.0]);
    out
}

/// A corpus of `n` distinct scenes.
pub fn scene_corpus(n: usize, w: usize, h: usize, seed: u64) -> Vec<ImageBuffer> {
    (0..n as u64).map(|i| street_scene(w, h, seed.wrapping_add(i * 7919))).collect()
}

/// Ground-plane depth in meters: far at the horizon, near at the bottom,
/// capped at `max_depth`. Rows above the horizon are `0` (no return).
pub fn ground_plane_depth(w: usize, h: usize, max_depth: f64) -> Vec<f64> {
    let horizon = h as f64 * 0.4;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let rows_below = y as f64 + 0.5 - horizon;
        if rows_below <= 0.0 {
            continue;
        }
        let depth = (h as f64 * 1.5 / rows_below).min(max_depth);
        for x in 0..w {
            out[y * w + x] = depth * (1.0 + 0.1 * ((x as f64 / w as f64) - 0.5).abs());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenes_are_valid_and_distinct() {
        let a = street_scene(64, 32, 1);
        let b = street_scene(64, 32, 2);
        assert_ne!(a, b);
        assert_eq!(a.max_sample(), 1.0);
        assert!(a.std_dev() > 0.05);
    }

    #[test]
    fn depth_is_positive_below_horizon() {
        let d = ground_plane_depth(16, 20, 80.0);
        assert!(d[19 * 16] > 0.0 && d[0] == 0.0);
        assert!(d[19 * 16] < d[10 * 16]);
    }
}
