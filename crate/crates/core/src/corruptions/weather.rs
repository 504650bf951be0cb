use std::sync::Arc;

use super::kind::{CorruptionKind, Family};
use super::table::Level;
use super::unsupported;
use crate::error::{Error, Result};
use crate::imagecore::{
    convolve_plane, fnv1a64, gaussian_blur_plane, plasma_fractal, resize, resize_plane_bilinear,
    DeterministicRng, ImageBuffer, Kernel2D, Plane, ResizeMode,
};

/// Where frost overlays come from.
#[derive(Debug, Clone)]
pub enum FrostSource {
    /// Synthesized ice texture, no files needed.
    Procedural,
    /// Photographic overlays; one is picked per image and randomly cropped.
    Assets { images: Arc<Vec<ImageBuffer>>, hash: u64 },
}

impl Default for FrostSource {
    fn default() -> Self {
        FrostSource::Procedural
    }
}

impl FrostSource {
    pub fn from_images(images: Vec<ImageBuffer>, hash: u64) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::MissingAsset("frost asset set is empty".into()));
        }
        Ok(FrostSource::Assets {
            images: Arc::new(images),
            hash,
        })
    }

    /// Digest recorded in manifests.
    pub fn content_hash(&self) -> u64 {
        match self {
            FrostSource::Procedural => fnv1a64(b"procedural-frost-v1"),
            FrostSource::Assets { hash, .. } => *hash,
        }
    }
}

/// Dispatches fog, frost and snow.
pub fn apply_weather(
    img: &ImageBuffer,
    kind: CorruptionKind,
    params: Level<'_>,
    frost: &FrostSource,
    rng: &mut DeterministicRng,
) -> Result<ImageBuffer> {
    match kind {
        CorruptionKind::Fog => fog(img, params.get("intensity"), params.get("wibbledecay"), rng),
        CorruptionKind::Frost => {
            let texture = frost_texture(frost, img.width(), img.height(), rng)?;
            Ok(frost_blend(img, &texture, params.get("image_weight"), params.get("frost_weight")))
        }
        CorruptionKind::Snow => snow(img, &SnowParams::from_level(params), rng),
        other => Err(unsupported(other, Family::Weather)),
    }
}

/// `(x + t F) * m / (m + t)` with `F` a plasma field and `m` the image maximum.
pub fn fog(img: &ImageBuffer, intensity: f64, wibbledecay: f64, rng: &mut DeterministicRng) -> Result<ImageBuffer> {
    if intensity == 0.0 {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    let size = w.max(h).next_power_of_two().max(8);
    let field = plasma_fractal(size, wibbledecay, rng)?;
    let field = resize_plane_bilinear(&field, w, h)?;
    let m = f64::from(img.max_sample());
    let gain = m / (m + intensity);
    let mut out = img.clone();
    for (px, &f) in out.data_mut().chunks_exact_mut(3).zip(&field.data) {
        for v in px {
            *v = ((f64::from(*v) + intensity * f64::from(f)) * gain) as f32;
        }
    }
    out.clamp();
    Ok(out)
}

pub fn frost_blend(img: &ImageBuffer, texture: &ImageBuffer, image_weight: f64, frost_weight: f64) -> ImageBuffer {
    let mut out = img.clone();
    for (v, &t) in out.data_mut().iter_mut().zip(texture.data()) {
        *v = (image_weight * f64::from(*v) + frost_weight * f64::from(t)) as f32;
    }
    out.clamp();
    out
}

/// A `w x h` frost overlay from `source`.
pub fn frost_texture(source: &FrostSource, w: usize, h: usize, rng: &mut DeterministicRng) -> Result<ImageBuffer> {
    match source {
        FrostSource::Procedural => procedural_frost(w, h, rng),
        FrostSource::Assets { images, .. } => {
            let asset = &images[rng.below(images.len())];
            let (aw, ah) = asset.dims();
            let asset = if aw < w || ah < h {
                let s = (w as f64 / aw as f64).max(h as f64 / ah as f64);
                let nw = ((aw as f64 * s).ceil() as usize).max(w);
                let nh = ((ah as f64 * s).ceil() as usize).max(h);
                resize(asset, nw, nh, ResizeMode::Bilinear)?
            } else {
                asset.clone()
            };
            let x0 = rng.below(asset.width() - w + 1);
            let y0 = rng.below(asset.height() - h + 1);
            Ok(ImageBuffer::from_fn(w, h, |x, y, c| asset.get(x0 + x, y0 + y, c)))
        }
    }
}

fn normalized(mut p: Plane) -> Plane {
    let (lo, hi) = p.min_max();
    let range = hi - lo;
    for v in &mut p.data {
        *v = if range > 0.0 { (*v - lo) / range } else { 0.0 };
    }
    p
}

/// Ice texture: a soft plasma haze plus thresholded, streaked band-limited noise,
/// tinted towards blue-white.
pub fn procedural_frost(w: usize, h: usize, rng: &mut DeterministicRng) -> Result<ImageBuffer> {
    let size = w.max(h).next_power_of_two().max(8);
    let haze = plasma_fractal(size, 1.8, rng)?;
    let haze = Plane::from_fn(w, h, |x, y| haze.get(x, y));

    let noise = Plane::from_fn(w, h, |_, _| rng.next_f64() as f32);
    let noise = gaussian_blur_plane(&noise, 1.2)?;
    let mut streaks = Plane::new(w, h);
    for _ in 0..2 {
        let k = Kernel2D::motion_line(7, 4.0, rng.uniform(0.0, 180.0))?;
        let s = normalized(convolve_plane(&noise, &k));
        for (a, b) in streaks.data.iter_mut().zip(&s.data) {
            *a += b * 0.5;
        }
    }
    let streaks = normalized(streaks);

    // Crystals cover roughly the brightest fifth of the streak field.
    let mut sorted = streaks.data.clone();
    sorted.sort_by(f32::total_cmp);
    let quantile = |q: f64| sorted[((sorted.len() - 1) as f64 * q) as usize];
    let (lo, hi) = (quantile(0.78), quantile(0.97));
    let span = (hi - lo).max(1e-6);

    let tint = [0.85f32, 0.92, 1.0];
    Ok(ImageBuffer::from_fn(w, h, |x, y, c| {
        let s = ((streaks.get(x, y) - lo) / span).clamp(0.0, 1.0);
        let crystal = s * s * (3.0 - 2.0 * s);
        let t = 0.05 + 0.1 * haze.get(x, y) + 0.85 * crystal;
        t * tint[c]
    }))
}

#[derive(Debug, Clone, Copy)]
pub struct SnowParams {
    pub flake_mean: f64,
    pub flake_std: f64,
    pub flake_zoom: f64,
    pub threshold: f64,
    pub motion_length: usize,
    pub motion_sigma: f64,
    pub image_weight: f64,
}

impl SnowParams {
    fn from_level(l: Level<'_>) -> Self {
        SnowParams {
            flake_mean: l.get("flake_mean"),
            flake_std: l.get("flake_std"),
            flake_zoom: l.get("flake_zoom"),
            threshold: l.get("threshold"),
            motion_length: l.get_usize("motion_length"),
            motion_sigma: l.get("motion_sigma"),
            image_weight: l.get("image_weight"),
        }
    }
}

fn zoom_plane(p: &Plane, factor: f64) -> Plane {
    let (w, h) = (p.width, p.height);
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    Plane::from_fn(w, h, |x, y| {
        let sx = (cx + (x as f64 + 0.5 - cx) / factor - 0.5).clamp(0.0, (w - 1) as f64);
        let sy = (cy + (y as f64 + 0.5 - cy) / factor - 0.5).clamp(0.0, (h - 1) as f64);
        let (x0, y0) = (sx.floor() as usize, sy.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
        let (fx, fy) = (sx - x0 as f64, sy - y0 as f64);
        let top = f64::from(p.get(x0, y0)) * (1.0 - fx) + f64::from(p.get(x1, y0)) * fx;
        let bot = f64::from(p.get(x0, y1)) * (1.0 - fx) + f64::from(p.get(x1, y1)) * fx;
        (top * (1.0 - fy) + bot * fy) as f32
    })
}

/// Flake layer: zoomed Gaussian field, thresholded and motion-streaked.
pub fn snow_layer(w: usize, h: usize, p: &SnowParams, rng: &mut DeterministicRng) -> Result<Plane> {
    let field = Plane::from_fn(w, h, |_, _| rng.normal(p.flake_mean, p.flake_std) as f32);
    let mut layer = zoom_plane(&field, p.flake_zoom);
    for v in &mut layer.data {
        *v = if f64::from(*v) < p.threshold { 0.0 } else { v.clamp(0.0, 1.0) };
    }
    let angle = rng.uniform(-135.0, -45.0);
    if p.motion_length == 0 || p.motion_sigma == 0.0 {
        return Ok(layer);
    }
    let k = Kernel2D::motion_line(p.motion_length, p.motion_sigma, angle)?;
    Ok(convolve_plane(&layer, &k))
}

/// Whitens the frame towards its luma, then adds the flake layer and its
/// 180-degree rotation.
pub fn snow(img: &ImageBuffer, p: &SnowParams, rng: &mut DeterministicRng) -> Result<ImageBuffer> {
    let (w, h) = img.dims();
    let layer = snow_layer(w, h, p, rng)?;
    let flipped = layer.rotated_180();
    let luma = img.luma();
    let wt = p.image_weight;
    let mut out = img.clone();
    for (i, px) in out.data_mut().chunks_exact_mut(3).enumerate() {
        let lift = f64::from(luma[i]) * 1.5 + 0.5;
        let flakes = f64::from(layer.data[i]) + f64::from(flipped.data[i]);
        for v in px {
            let x = f64::from(*v);
            *v = (wt * x + (1.0 - wt) * x.max(lift) + flakes) as f32;
        }
    }
    out.clamp();
    Ok(out)
}
