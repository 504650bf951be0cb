use std::io::Cursor;

use image::codecs::jpeg::JpegEncoder;
use image::ExtendedColorType;

use super::kind::{CorruptionKind, Family};
use super::table::Level;
use super::unsupported;
use crate::error::{Error, Result};
use crate::imagecore::{
    gaussian_blur_plane, resize, sample_bilinear_reflect, DeterministicRng, ImageBuffer, Plane, ResizeMode,
};

/// Dispatches elastic, color quantization, pixelate and jpeg.
pub fn apply_digital(
    img: &ImageBuffer,
    kind: CorruptionKind,
    params: Level<'_>,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    match kind {
        CorruptionKind::ElasticTransform => elastic_transform(
            img,
            params.get("alpha"),
            params.get("sigma"),
            params.get("affine"),
            rng,
        ),
        CorruptionKind::ColorQuant => Ok(color_quant(img, params.get_usize("bits") as u32)),
        CorruptionKind::Pixelate => pixelate(img, params.get("factor")),
        CorruptionKind::JpegCompress => jpeg_compress(img, params.get_usize("quality") as u8),
        other => Err(unsupported(other, Family::Digital)),
    }
}

/// Smooth random warp plus a small affine jitter, sampled bilinearly with
/// reflect boundaries.
///
/// `alpha`, `sigma` and `affine` are fractions of the shorter image side.
pub fn elastic_transform(
    img: &ImageBuffer,
    alpha: f64,
    sigma: f64,
    affine: f64,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    let (w, h) = img.dims();
    let side = w.min(h) as f64;
    let (alpha, sigma, affine) = (alpha * side, sigma * side, affine * side);

    // Affine part: displacement = affine * (t + A q), q in [-1, 1]^2 about the center.
    let coef: Vec<f64> = (0..6).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let field = |rng: &mut DeterministicRng| -> Result<Plane> {
        let raw = Plane::from_fn(w, h, |_, _| rng.uniform(-1.0, 1.0) as f32);
        gaussian_blur_plane(&raw, sigma)
    };
    let fx = field(rng)?;
    let fy = field(rng)?;

    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let half = side / 2.0;
    let mut out = img.clone();
    for y in 0..h {
        let qy = (y as f64 - cy) / half;
        for x in 0..w {
            let qx = (x as f64 - cx) / half;
            let ax = affine * (coef[0] + coef[1] * qx + coef[2] * qy) / 3.0;
            let ay = affine * (coef[3] + coef[4] * qx + coef[5] * qy) / 3.0;
            let dx = alpha * f64::from(fx.get(x, y)) + ax;
            let dy = alpha * f64::from(fy.get(x, y)) + ay;
            out.set_pixel(x, y, sample_bilinear_reflect(img, x as f64 + dx, y as f64 + dy));
        }
    }
    out.clamp();
    Ok(out)
}

/// Uniform quantization of each channel to `bits` bits.
pub fn color_quant(img: &ImageBuffer, bits: u32) -> ImageBuffer {
    let levels = ((1u32 << bits) - 1) as f32;
    img.map(|v| (v * levels).round() / levels)
}

/// Nearest downsample by `factor`, then nearest upsample back.
pub fn pixelate(img: &ImageBuffer, factor: f64) -> Result<ImageBuffer> {
    let (w, h) = img.dims();
    let sw = ((w as f64 * factor) as usize).max(1);
    let sh = ((h as f64 * factor) as usize).max(1);
    let small = resize(img, sw, sh, ResizeMode::Nearest)?;
    resize(&small, w, h, ResizeMode::Nearest)
}

/// Baseline JPEG round trip at `quality`.
pub fn jpeg_compress(img: &ImageBuffer, quality: u8) -> Result<ImageBuffer> {
    let (w, h) = img.dims();
    let mut bytes = Vec::new();
    let codec = |e: image::ImageError| Error::InvalidParameter(format!("jpeg codec: {e}"));
    JpegEncoder::new_with_quality(Cursor::new(&mut bytes), quality.clamp(1, 100))
        .encode(&img.to_rgb8(), w as u32, h as u32, ExtendedColorType::Rgb8)
        .map_err(codec)?;
    let decoded = image::load_from_memory_with_format(&bytes, image::ImageFormat::Jpeg)
        .map_err(codec)?
        .to_rgb8();
    ImageBuffer::from_rgb8(w, h, decoded.as_raw())
}
