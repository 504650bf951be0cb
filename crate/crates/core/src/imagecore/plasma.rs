//! Diamond-square plasma fractal on a toroidal grid.

use super::buffer::Plane;
use super::rng::DeterministicRng;
use crate::error::{Error, Result};

const INITIAL_WIBBLE: f64 = 100.0;

/// Generates a `size x size` heightmap min-max normalized to `[0, 1]`.
///
/// Each refinement level perturbs midpoints by `wibble * U(-wibble, wibble)`
/// and then divides `wibble` by `wibbledecay`, so larger decays give
/// smoother fields.
pub fn plasma_fractal(size: usize, wibbledecay: f64, rng: &mut DeterministicRng) -> Result<Plane> {
    if size < 8 || !size.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "plasma size must be a power of two >= 8, got {size}"
        )));
    }
    if !(wibbledecay > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "wibbledecay must be > 1, got {wibbledecay}"
        )));
    }
    let mut map = vec![0.0f64; size * size];
    let at = |r: usize, c: usize| r * size + c;
    let mut step = size;
    let mut wibble = INITIAL_WIBBLE;

    while step >= 2 {
        let half = step / 2;
        let n = size / step;

        // Squares: centers get the mean of their four corners.
        let mut centers = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let i1 = (i + 1) % n;
                let j1 = (j + 1) % n;
                let sum = map[at(i * step, j * step)]
                    + map[at(i1 * step, j * step)]
                    + map[at(i * step, j1 * step)]
                    + map[at(i1 * step, j1 * step)];
                centers[i * n + j] = sum / 4.0 + wibble * rng.uniform(-wibble, wibble);
            }
        }
        for i in 0..n {
            for j in 0..n {
                map[at(i * step + half, j * step + half)] = centers[i * n + j];
            }
        }

        // Diamonds on the corner rows, between horizontal corner pairs.
        let mut top = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let up = (i + n - 1) % n;
                let right = (j + 1) % n;
                let sum = map[at(i * step + half, j * step + half)]
                    + map[at(up * step + half, j * step + half)]
                    + map[at(i * step, j * step)]
                    + map[at(i * step, right * step)];
                top[i * n + j] = sum / 4.0 + wibble * rng.uniform(-wibble, wibble);
            }
        }
        // Diamonds on the center rows, between vertical corner pairs.
        let mut left = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let prev = (j + n - 1) % n;
                let down = (i + 1) % n;
                let sum = map[at(i * step + half, j * step + half)]
                    + map[at(i * step + half, prev * step + half)]
                    + map[at(i * step, j * step)]
                    + map[at(down * step, j * step)];
                left[i * n + j] = sum / 4.0 + wibble * rng.uniform(-wibble, wibble);
            }
        }
        for i in 0..n {
            for j in 0..n {
                map[at(i * step, j * step + half)] = top[i * n + j];
                map[at(i * step + half, j * step)] = left[i * n + j];
            }
        }

        step /= 2;
        wibble /= wibbledecay;
    }

    let (lo, hi) = map
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    let data = map
        .iter()
        .map(|&v| if range > 0.0 { ((v - lo) / range) as f32 } else { 0.0 })
        .collect();
    Ok(Plane {
        width: size,
        height: size,
        data,
    })
}
