//! Convolution kernels and reflect-padded filtering.

use super::buffer::{ImageBuffer, Plane};
use crate::error::{Error, Result};

/// Square, odd-sized filter kernel stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel2D {
    size: usize,
    weights: Vec<f64>,
}

impl Kernel2D {
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size % 2 == 0 {
            return Err(Error::InvalidKernel(format!("kernel size {size} is not odd")));
        }
        if weights.len() != size * size {
            return Err(Error::InvalidKernel(format!(
                "kernel of size {size} needs {} weights, got {}",
                size * size,
                weights.len()
            )));
        }
        Ok(Kernel2D { size, weights })
    }

    pub fn identity() -> Self {
        Kernel2D {
            size: 1,
            weights: vec![1.0],
        }
    }

    pub fn box_filter(size: usize) -> Result<Self> {
        let n = (size * size) as f64;
        Self::new(size, vec![1.0 / n; size * size])
    }

    /// Normalized isotropic Gaussian with radius `ceil(3 sigma)`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let taps = gaussian_taps(sigma)?;
        let size = taps.len();
        let mut weights = Vec::with_capacity(size * size);
        for wy in &taps {
            for wx in &taps {
                weights.push(wy * wx);
            }
        }
        Ok(Kernel2D { size, weights })
    }

    /// Aliased disk of `radius` smoothed by a Gaussian of `alias_sigma`,
    /// normalized to unit mass. The support is at least 17x17 so the
    /// anti-aliasing pass has room at small radii.
    pub fn disk(radius: f64, alias_sigma: f64) -> Result<Self> {
        if radius < 0.0 || alias_sigma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "disk radius {radius} and alias sigma {alias_sigma} must be non-negative"
            )));
        }
        if radius < 1.0 {
            return Ok(Self::identity());
        }
        let half = (radius.ceil() as usize).max(8);
        let size = 2 * half + 1;
        let r2 = radius * radius;
        let mut weights = Vec::with_capacity(size * size);
        for y in 0..size {
            for x in 0..size {
                let dx = x as f64 - half as f64;
                let dy = y as f64 - half as f64;
                weights.push(if dx * dx + dy * dy <= r2 { 1.0 } else { 0.0 });
            }
        }
        let mut k = Kernel2D { size, weights };
        if alias_sigma > 0.0 {
            k = k.smoothed(alias_sigma);
        }
        k.normalize();
        Ok(k)
    }

    /// One-sided motion kernel: `length` taps stepping along `angle_deg`
    /// from the center, Gaussian weighted by distance with `sigma`,
    /// bilinearly splatted onto the grid and normalized to unit mass.
    pub fn motion_line(length: usize, sigma: f64, angle_deg: f64) -> Result<Self> {
        if length == 0 || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "motion kernel needs length >= 1 and sigma > 0, got {length}, {sigma}"
            )));
        }
        let half = length;
        let size = 2 * half + 1;
        let mut weights = vec![0.0; size * size];
        let (sin, cos) = angle_deg.to_radians().sin_cos();
        for i in 0..length {
            let t = i as f64;
            let w = (-t * t / (2.0 * sigma * sigma)).exp();
            let px = half as f64 + t * cos;
            let py = half as f64 - t * sin;
            let x0 = px.floor();
            let y0 = py.floor();
            let fx = px - x0;
            let fy = py - y0;
            for (dx, dy, f) in [
                (0, 0, (1.0 - fx) * (1.0 - fy)),
                (1, 0, fx * (1.0 - fy)),
                (0, 1, (1.0 - fx) * fy),
                (1, 1, fx * fy),
            ] {
                let xi = x0 as i64 + dx;
                let yi = y0 as i64 + dy;
                if f > 0.0 && (0..size as i64).contains(&xi) && (0..size as i64).contains(&yi) {
                    weights[yi as usize * size + xi as usize] += w * f;
                }
            }
        }
        let mut k = Kernel2D { size, weights };
        k.normalize();
        Ok(k)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.sum() - 1.0).abs() < 1e-6
    }

    fn normalize(&mut self) {
        let s = self.sum();
        if s > 0.0 {
            for w in &mut self.weights {
                *w /= s;
            }
        }
    }

    fn smoothed(&self, sigma: f64) -> Self {
        let plane = Plane {
            width: self.size,
            height: self.size,
            data: self.weights.iter().map(|&w| w as f32).collect(),
        };
        let blurred = gaussian_blur_plane(&plane, sigma).expect("sigma checked by caller");
        Kernel2D {
            size: self.size,
            weights: blurred.data.iter().map(|&w| f64::from(w)).collect(),
        }
    }

    /// Non-zero taps as `(dx, dy, weight)` offsets from the center.
    fn taps(&self) -> Vec<(isize, isize, f64)> {
        let r = (self.size / 2) as isize;
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(i, &w)| ((i % self.size) as isize - r, (i / self.size) as isize - r, w))
            .collect()
    }
}

/// Mirror index into `[0, n)` with half-sample symmetry (`-1 -> 0`, `n -> n-1`).
#[inline]
pub fn reflect_index(i: isize, n: usize) -> usize {
    let n = n as isize;
    if n == 1 {
        return 0;
    }
    let period = 2 * n;
    let mut m = i.rem_euclid(period);
    if m >= n {
        m = period - 1 - m;
    }
    m as usize
}

/// Applies `k` unflipped at every pixel with reflect padding:
/// `out(x, y) = sum k(i, j) * img(x + i - r, y + j - r)`, then clamps.
pub fn convolve(img: &ImageBuffer, k: &Kernel2D) -> Result<ImageBuffer> {
    let min_side = img.width().min(img.height());
    if k.size() > 2 * min_side {
        return Err(Error::InvalidKernel(format!(
            "kernel size {} exceeds twice the smaller image side ({min_side})",
            k.size()
        )));
    }
    Ok(convolve_unchecked(img, k))
}

/// Same as [`convolve`] without the size guard; reflection handles any offset.
pub(crate) fn convolve_unchecked(img: &ImageBuffer, k: &Kernel2D) -> ImageBuffer {
    if k.size() == 1 && k.weights()[0] == 1.0 {
        return img.clone();
    }
    let (w, h) = img.dims();
    let taps = k.taps();
    let src = img.data();
    let mut out = vec![0.0f32; src.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0f64; 3];
            for &(dx, dy, wt) in &taps {
                let sx = reflect_index(x as isize + dx, w);
                let sy = reflect_index(y as isize + dy, h);
                let i = (sy * w + sx) * 3;
                acc[0] += wt * f64::from(src[i]);
                acc[1] += wt * f64::from(src[i + 1]);
                acc[2] += wt * f64::from(src[i + 2]);
            }
            let o = (y * w + x) * 3;
            for c in 0..3 {
                out[o + c] = acc[c] as f32;
            }
        }
    }
    ImageBuffer::new(w, h, out).expect("dimensions preserved")
}

/// Normalized 1-D Gaussian taps with radius `ceil(3 sigma)`.
pub fn gaussian_taps(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(vec![1.0]);
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= s;
    }
    Ok(taps)
}

fn separable_pass(data: &[f32], w: usize, h: usize, ch: usize, taps: &[f64], horizontal: bool) -> Vec<f32> {
    let r = (taps.len() / 2) as isize;
    let mut out = vec![0.0f32; data.len()];
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut acc = 0.0f64;
                for (k, &t) in taps.iter().enumerate() {
                    let off = k as isize - r;
                    let (sx, sy) = if horizontal {
                        (reflect_index(x as isize + off, w), y)
                    } else {
                        (x, reflect_index(y as isize + off, h))
                    };
                    acc += t * f64::from(data[(sy * w + sx) * ch + c]);
                }
                out[(y * w + x) * ch + c] = acc as f32;
            }
        }
    }
    out
}

/// Separable Gaussian blur; `sigma = 0` returns the input unchanged.
pub fn gaussian_blur(img: &ImageBuffer, sigma: f64) -> Result<ImageBuffer> {
    let taps = gaussian_taps(sigma)?;
    if taps.len() == 1 {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    let tmp = separable_pass(img.data(), w, h, 3, &taps, true);
    let out = separable_pass(&tmp, w, h, 3, &taps, false);
    ImageBuffer::new(w, h, out)
}

/// Gaussian blur of a single-channel field. No clamping.
pub fn gaussian_blur_plane(plane: &Plane, sigma: f64) -> Result<Plane> {
    let taps = gaussian_taps(sigma)?;
    if taps.len() == 1 {
        return Ok(plane.clone());
    }
    let tmp = separable_pass(&plane.data, plane.width, plane.height, 1, &taps, true);
    let data = separable_pass(&tmp, plane.width, plane.height, 1, &taps, false);
    Ok(Plane {
        width: plane.width,
        height: plane.height,
        data,
    })
}

/// Applies `k` to a single-channel field with reflect padding. No clamping.
pub fn convolve_plane(plane: &Plane, k: &Kernel2D) -> Plane {
    let taps = k.taps();
    let (w, h) = (plane.width, plane.height);
    Plane::from_fn(w, h, |x, y| {
        let mut acc = 0.0f64;
        for &(dx, dy, wt) in &taps {
            let sx = reflect_index(x as isize + dx, w);
            let sy = reflect_index(y as isize + dy, h);
            acc += wt * f64::from(plane.data[sy * w + sx]);
        }
        acc as f32
    })
}
