use super::kind::{CorruptionKind, Family};
use super::table::Level;
use super::unsupported;
use crate::error::Result;
use crate::imagecore::{
    convolve_unchecked, gaussian_blur, sample_bilinear_reflect, DeterministicRng, ImageBuffer, Kernel2D,
};

/// Dispatches defocus, glass, motion and zoom blur.
pub fn apply_blur(
    img: &ImageBuffer,
    kind: CorruptionKind,
    params: Level<'_>,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    match kind {
        CorruptionKind::DefocusBlur => defocus_blur(img, params.get("radius"), params.get("alias_sigma")),
        CorruptionKind::GlassBlur => glass_blur(
            img,
            params.get("sigma"),
            params.get_usize("max_delta"),
            params.get_usize("iterations"),
            rng,
        ),
        CorruptionKind::MotionBlur => {
            motion_blur(img, params.get_usize("length"), params.get("sigma"), rng)
        }
        CorruptionKind::ZoomBlur => zoom_blur(img, params.get("max_zoom"), params.get("step")),
        other => Err(unsupported(other, Family::Blur)),
    }
}

pub fn defocus_blur(img: &ImageBuffer, radius: f64, alias_sigma: f64) -> Result<ImageBuffer> {
    let k = Kernel2D::disk(radius, alias_sigma)?;
    Ok(convolve_unchecked(img, &k))
}

/// Blur, jitter every interior pixel with a random neighbour, blur again.
///
/// Offsets are drawn from `[-d, d - 1]` and pixels are visited bottom-right
/// to top-left, as in the reference implementation.
pub fn glass_blur(
    img: &ImageBuffer,
    sigma: f64,
    max_delta: usize,
    iterations: usize,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    let mut x = gaussian_blur(img, sigma)?;
    let (w, h) = x.dims();
    let d = max_delta as i64;
    if d > 0 {
        for _ in 0..iterations {
            for yy in (d + 1..=h as i64 - d).rev() {
                for xx in (d + 1..=w as i64 - d).rev() {
                    let dx = rng.int_inclusive(-d, d - 1);
                    let dy = rng.int_inclusive(-d, d - 1);
                    let (x0, y0) = (xx as usize, yy as usize);
                    let (x1, y1) = ((xx + dx) as usize, (yy + dy) as usize);
                    let a = x.pixel(x0, y0);
                    let b = x.pixel(x1, y1);
                    x.set_pixel(x0, y0, b);
                    x.set_pixel(x1, y1, a);
                }
            }
        }
    }
    gaussian_blur(&x, sigma)
}

/// Line blur along a random direction in `[-45, 45]` degrees.
pub fn motion_blur(img: &ImageBuffer, length: usize, sigma: f64, rng: &mut DeterministicRng) -> Result<ImageBuffer> {
    let angle = rng.uniform(-45.0, 45.0);
    if length == 0 || sigma == 0.0 {
        return Ok(img.clone());
    }
    let k = Kernel2D::motion_line(length, sigma, angle)?;
    Ok(convolve_unchecked(img, &k))
}

/// Center zoom by `factor`, sampled bilinearly; `factor = 1` is the identity.
pub fn center_zoom(img: &ImageBuffer, factor: f64) -> ImageBuffer {
    if factor == 1.0 {
        return img.clone();
    }
    let (w, h) = img.dims();
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let mut out = img.clone();
    for y in 0..h {
        let sy = cy + (y as f64 + 0.5 - cy) / factor - 0.5;
        for x in 0..w {
            let sx = cx + (x as f64 + 0.5 - cx) / factor - 0.5;
            out.set_pixel(x, y, sample_bilinear_reflect(img, sx, sy));
        }
    }
    out
}

/// Mean of the image and its center zooms at `1, 1 + step, ..., max_zoom`.
pub fn zoom_blur(img: &ImageBuffer, max_zoom: f64, step: f64) -> Result<ImageBuffer> {
    let n = ((max_zoom - 1.0) / step).round().max(0.0) as usize;
    if n == 0 {
        return Ok(img.clone());
    }
    let mut acc: Vec<f64> = img.data().iter().map(|&v| f64::from(v)).collect();
    for k in 0..=n {
        let z = center_zoom(img, 1.0 + k as f64 * step);
        for (a, &v) in acc.iter_mut().zip(z.data()) {
            *a += f64::from(v);
        }
    }
    let denom = (n + 2) as f64;
    ImageBuffer::new(
        img.width(),
        img.height(),
        acc.into_iter().map(|a| (a / denom) as f32).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checkerboard(n: usize, cell: usize) -> ImageBuffer {
        ImageBuffer::from_fn(n, n, |x, y, _| ((x / cell + y / cell) % 2) as f32)
    }

    #[test]
    fn tiny_defocus_is_identity() {
        let img = checkerboard(16, 2);
        assert_eq!(defocus_blur(&img, 0.5, 0.0).unwrap(), img);
    }

    #[test]
    fn unit_zoom_is_identity() {
        let img = checkerboard(16, 3);
        assert_eq!(zoom_blur(&img, 1.0, 0.01).unwrap(), img);
        assert_eq!(center_zoom(&img, 1.0), img);
    }

    #[test]
    fn glass_swaps_are_measurable_and_mean_preserving() {
        let img = checkerboard(32, 4);
        let plain = gaussian_blur(&gaussian_blur(&img, 0.7).unwrap(), 0.7).unwrap();
        let glass = glass_blur(&img, 0.7, 1, 2, &mut DeterministicRng::new(3)).unwrap();
        let mut a: Vec<f32> = plain.data().to_vec();
        let mut b: Vec<f32> = glass.data().to_vec();
        a.sort_by(f32::total_cmp);
        b.sort_by(f32::total_cmp);
        assert_ne!(a, b);
        assert!((glass.mean() - img.mean()).abs() < 0.01);
    }

    #[test]
    fn motion_blur_keeps_constant_images() {
        let img = ImageBuffer::filled(24, 24, 0.3);
        let out = motion_blur(&img, 15, 5.0, &mut DeterministicRng::new(2)).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.3).abs() < 1e-5));
    }

    #[test]
    fn large_kernels_work_on_small_frames() {
        let img = checkerboard(8, 1);
        assert!(defocus_blur(&img, 10.0, 0.5).is_ok());
        assert!(motion_blur(&img, 20, 15.0, &mut DeterministicRng::new(1)).is_ok());
    }
}
