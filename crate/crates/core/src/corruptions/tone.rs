use super::kind::{CorruptionKind, Family};
use super::table::Level;
use super::unsupported;
use crate::error::Result;
use crate::imagecore::{map_hsv, DeterministicRng, ImageBuffer};

/// Dispatches brightness, dark and contrast.
pub fn apply_tone(
    img: &ImageBuffer,
    kind: CorruptionKind,
    params: Level<'_>,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    match kind {
        CorruptionKind::Brightness => Ok(brightness(img, params.get("shift"))),
        CorruptionKind::Contrast => Ok(contrast(img, params.get("factor"))),
        CorruptionKind::Dark => Ok(dark(
            img,
            params.get("scale"),
            params.get("gamma"),
            params.get("shot_lambda"),
            params.get("read_sigma"),
            rng,
        )),
        other => Err(unsupported(other, Family::Tone)),
    }
}

/// Adds `shift` to the HSV value channel.
pub fn brightness(img: &ImageBuffer, shift: f64) -> ImageBuffer {
    map_hsv(img, |[h, s, v]| [h, s, (v + shift).clamp(0.0, 1.0)])
}

/// Scales every channel about its own global mean.
pub fn contrast(img: &ImageBuffer, factor: f64) -> ImageBuffer {
    if factor == 1.0 {
        return img.clone();
    }
    let means = img.channel_means();
    let mut out = img.clone();
    for px in out.data_mut().chunks_exact_mut(3) {
        for (v, m) in px.iter_mut().zip(means) {
            *v = ((f64::from(*v) - m) * factor + m) as f32;
        }
    }
    out.clamp();
    out
}

/// Underexposure: `(x s)^gamma`, then Poisson shot noise and Gaussian read noise.
pub fn dark(
    img: &ImageBuffer,
    scale: f64,
    gamma: f64,
    shot_lambda: f64,
    read_sigma: f64,
    rng: &mut DeterministicRng,
) -> ImageBuffer {
    let mut out = img.clone();
    for v in out.data_mut() {
        let x = (f64::from(*v) * scale).powf(gamma);
        let noisy = rng.poisson(x * shot_lambda) / shot_lambda + read_sigma * rng.standard_normal();
        *v = noisy as f32;
    }
    out.clamp();
    out
}
