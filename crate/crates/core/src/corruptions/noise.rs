use super::kind::{CorruptionKind, Family};
use super::table::Level;
use super::unsupported;
use crate::error::Result;
use crate::imagecore::{DeterministicRng, ImageBuffer};

/// Dispatches gaussian, shot, impulse and iso noise.
pub fn apply_noise(
    img: &ImageBuffer,
    kind: CorruptionKind,
    params: Level<'_>,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    match kind {
        CorruptionKind::GaussianNoise => Ok(gaussian_noise(img, params.get("sigma"), rng)),
        CorruptionKind::ShotNoise => Ok(shot_noise(img, params.get("lambda"), rng)),
        CorruptionKind::ImpulseNoise => Ok(impulse_noise(img, params.get("amount"), rng)),
        CorruptionKind::IsoNoise => Ok(iso_noise(
            img,
            params.get("lambda"),
            params.get("chroma_sigma"),
            rng,
        )),
        other => Err(unsupported(other, Family::Noise)),
    }
}

/// Additive white noise, `x + N(0, sigma)` per sample.
pub fn gaussian_noise(img: &ImageBuffer, sigma: f64, rng: &mut DeterministicRng) -> ImageBuffer {
    if sigma == 0.0 {
        return img.clone();
    }
    let mut out = img.clone();
    for v in out.data_mut() {
        *v = (f64::from(*v) + sigma * rng.standard_normal()) as f32;
    }
    out.clamp();
    out
}

/// Photon noise, `Poisson(x * lambda) / lambda` per sample.
pub fn shot_noise(img: &ImageBuffer, lambda: f64, rng: &mut DeterministicRng) -> ImageBuffer {
    let mut out = img.clone();
    for v in out.data_mut() {
        *v = (rng.poisson(f64::from(*v) * lambda) / lambda) as f32;
    }
    out.clamp();
    out
}

/// Salt-and-pepper: each pixel is replaced with probability `amount`,
/// becoming black or white with equal odds.
pub fn impulse_noise(img: &ImageBuffer, amount: f64, rng: &mut DeterministicRng) -> ImageBuffer {
    let mut out = img.clone();
    for px in out.data_mut().chunks_exact_mut(3) {
        if rng.next_f64() < amount {
            let v = if rng.next_f64() < 0.5 { 0.0 } else { 1.0 };
            px.fill(v);
        }
    }
    out
}

/// Sensor noise in a YCbCr split: Poisson shot noise on luma plus
/// Gaussian noise on both chroma channels.
pub fn iso_noise(img: &ImageBuffer, lambda: f64, chroma_sigma: f64, rng: &mut DeterministicRng) -> ImageBuffer {
    let mut out = img.clone();
    for px in out.data_mut().chunks_exact_mut(3) {
        let [r, g, b] = [f64::from(px[0]), f64::from(px[1]), f64::from(px[2])];
        let y = 0.299 * r + 0.587 * g + 0.114 * b;
        let cb = 0.564 * (b - y) + chroma_sigma * rng.standard_normal();
        let cr = 0.713 * (r - y) + chroma_sigma * rng.standard_normal();
        let y = rng.poisson(y * lambda) / lambda;
        px[0] = (y + 1.403 * cr) as f32;
        px[1] = (y - 0.344 * cb - 0.714 * cr) as f32;
        px[2] = (y + 1.773 * cb) as f32;
    }
    out.clamp();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_std(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
        let d: Vec<f64> = a.data().iter().zip(b.data()).map(|(&x, &y)| f64::from(x - y)).collect();
        let m = d.iter().sum::<f64>() / d.len() as f64;
        (d.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (d.len() - 1) as f64).sqrt()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let img = ImageBuffer::from_fn(9, 9, |x, y, c| ((x + y + c) % 7) as f32 / 7.0);
        assert_eq!(gaussian_noise(&img, 0.0, &mut DeterministicRng::new(4)), img);
    }

    #[test]
    fn gaussian_sigma_is_calibrated() {
        let img = ImageBuffer::filled(256, 256, 0.5);
        let out = gaussian_noise(&img, 0.08, &mut DeterministicRng::new(99));
        let s = sample_std(&out, &img);
        assert!((s / 0.08 - 1.0).abs() < 0.02, "std {s}");
    }

    #[test]
    fn impulse_only_writes_extremes() {
        let img = ImageBuffer::filled(64, 64, 0.5);
        let out = impulse_noise(&img, 0.2, &mut DeterministicRng::new(5));
        assert!(out.data().iter().all(|&v| v == 0.0 || v == 0.5 || v == 1.0));
        let black = out.data().iter().filter(|&&v| v == 0.0).count();
        let white = out.data().iter().filter(|&&v| v == 1.0).count();
        assert!(black > 0 && white > 0);
    }

    #[test]
    fn iso_noise_keeps_mean_near_input() {
        let img = ImageBuffer::filled(128, 128, 0.5);
        let out = iso_noise(&img, 25.0, 0.05, &mut DeterministicRng::new(8));
        assert!((out.mean() - 0.5).abs() < 0.01);
        assert!(out.std_dev() > 0.05);
    }

    #[test]
    fn rejects_other_families() {
        let t = crate::corruptions::SeverityTable::default();
        let lvl = t.level(CorruptionKind::Fog, 1).unwrap();
        let img = ImageBuffer::filled(8, 8, 0.5);
        assert!(apply_noise(&img, CorruptionKind::Fog, lvl, &mut DeterministicRng::new(1)).is_err());
    }
}
