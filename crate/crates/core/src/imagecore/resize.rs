use serde::{Deserialize, Serialize};

use super::buffer::{ImageBuffer, Plane};
use super::kernel::reflect_index;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResizeMode {
    Nearest,
    Bilinear,
}

/// Source coordinate of destination index `i` under pixel-center alignment.
#[inline]
fn source_coord(i: usize, scale: f64) -> f64 {
    (i as f64 + 0.5) * scale - 0.5
}

#[inline]
fn nearest_index(i: usize, scale: f64, n: usize) -> usize {
    (((i as f64 + 0.5) * scale).floor() as usize).min(n - 1)
}

/// Linear interpolation weights for a clamped source coordinate.
#[inline]
fn lerp_pair(s: f64, n: usize) -> (usize, usize, f64) {
    let s = s.clamp(0.0, (n - 1) as f64);
    let i0 = s.floor() as usize;
    let i1 = (i0 + 1).min(n - 1);
    (i0, i1, s - i0 as f64)
}

pub fn resize(img: &ImageBuffer, w: usize, h: usize, mode: ResizeMode) -> Result<ImageBuffer> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidParameter(format!("cannot resize to {w}x{h}")));
    }
    let (sw, sh) = img.dims();
    if (sw, sh) == (w, h) && mode == ResizeMode::Nearest {
        return Ok(img.clone());
    }
    let sx = sw as f64 / w as f64;
    let sy = sh as f64 / h as f64;
    let out = match mode {
        ResizeMode::Nearest => {
            let xs: Vec<usize> = (0..w).map(|i| nearest_index(i, sx, sw)).collect();
            let ys: Vec<usize> = (0..h).map(|j| nearest_index(j, sy, sh)).collect();
            ImageBuffer::from_fn(w, h, |x, y, c| img.get(xs[x], ys[y], c))
        }
        ResizeMode::Bilinear => {
            let xs: Vec<_> = (0..w).map(|i| lerp_pair(source_coord(i, sx), sw)).collect();
            let ys: Vec<_> = (0..h).map(|j| lerp_pair(source_coord(j, sy), sh)).collect();
            ImageBuffer::from_fn(w, h, |x, y, c| {
                let (x0, x1, fx) = xs[x];
                let (y0, y1, fy) = ys[y];
                let top = f64::from(img.get(x0, y0, c)) * (1.0 - fx) + f64::from(img.get(x1, y0, c)) * fx;
                let bot = f64::from(img.get(x0, y1, c)) * (1.0 - fx) + f64::from(img.get(x1, y1, c)) * fx;
                (top * (1.0 - fy) + bot * fy) as f32
            })
        }
    };
    Ok(out)
}

/// Bilinear resize of a single-channel field.
pub fn resize_plane_bilinear(plane: &Plane, w: usize, h: usize) -> Result<Plane> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidParameter(format!("cannot resize to {w}x{h}")));
    }
    let sx = plane.width as f64 / w as f64;
    let sy = plane.height as f64 / h as f64;
    let xs: Vec<_> = (0..w).map(|i| lerp_pair(source_coord(i, sx), plane.width)).collect();
    let ys: Vec<_> = (0..h).map(|j| lerp_pair(source_coord(j, sy), plane.height)).collect();
    Ok(Plane::from_fn(w, h, |x, y| {
        let (x0, x1, fx) = xs[x];
        let (y0, y1, fy) = ys[y];
        let top = f64::from(plane.get(x0, y0)) * (1.0 - fx) + f64::from(plane.get(x1, y0)) * fx;
        let bot = f64::from(plane.get(x0, y1)) * (1.0 - fx) + f64::from(plane.get(x1, y1)) * fx;
        (top * (1.0 - fy) + bot * fy) as f32
    }))
}

/// Bilinear sample of all three channels at a fractional position,
/// reflecting coordinates that fall outside the raster.
pub fn sample_bilinear_reflect(img: &ImageBuffer, x: f64, y: f64) -> [f32; 3] {
    let (w, h) = img.dims();
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let xa = reflect_index(x0 as isize, w);
    let xb = reflect_index(x0 as isize + 1, w);
    let ya = reflect_index(y0 as isize, h);
    let yb = reflect_index(y0 as isize + 1, h);
    let mut out = [0.0f32; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let top = f64::from(img.get(xa, ya, c)) * (1.0 - fx) + f64::from(img.get(xb, ya, c)) * fx;
        let bot = f64::from(img.get(xa, yb, c)) * (1.0 - fx) + f64::from(img.get(xb, yb, c)) * fx;
        *o = (top * (1.0 - fy) + bot * fy) as f32;
    }
    out
}
