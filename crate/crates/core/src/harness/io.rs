//! Raster codecs: 8-bit RGB images, 16-bit depth PNGs and PFM floats.

use std::fs;
use std::io::Write;
use std::path::Path;

use image::{DynamicImage, ImageFormat};
use serde::{Deserialize, Serialize};

use crate::depthmetrics::DepthMap;
use crate::error::{Error, Result};
use crate::imagecore::{fnv1a64, ImageBuffer};

fn decode_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        _ => Ok(()),
    }
}

/// Writes through a sibling temp file so readers never see a torn file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    ensure_parent(path)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Decodes a PNG or JPEG into unit-range RGB.
pub fn read_rgb(path: &Path) -> Result<ImageBuffer> {
    let bytes = read_bytes(path)?;
    let img = image::load_from_memory(&bytes).map_err(|e| decode_err(path, e))?;
    let rgb = img.to_rgb8();
    ImageBuffer::from_rgb8(rgb.width() as usize, rgb.height() as usize, rgb.as_raw())
}

/// Encodes `img` as an 8-bit RGB PNG.
pub fn encode_png_rgb(img: &ImageBuffer) -> Result<Vec<u8>> {
    let rgb = image::RgbImage::from_raw(img.width() as u32, img.height() as u32, img.to_rgb8())
        .ok_or_else(|| Error::Shape("RGB buffer does not match its dimensions".into()))?;
    let mut out = std::io::Cursor::new(Vec::new());
    DynamicImage::ImageRgb8(rgb)
        .write_to(&mut out, ImageFormat::Png)
        .map_err(|e| Error::InvalidRequest(format!("PNG encoding failed: {e}")))?;
    Ok(out.into_inner())
}

pub fn write_png_rgb(path: &Path, img: &ImageBuffer) -> Result<()> {
    write_atomic(path, &encode_png_rgb(img)?)
}

/// 64-bit FNV-1a over the 8-bit RGB samples, the form images are stored in.
pub fn content_hash(img: &ImageBuffer) -> u64 {
    fnv1a64(&img.to_rgb8())
}

/// On-disk depth encodings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DepthFormat {
    /// 16-bit grayscale PNG holding `depth * divisor`; zero marks no data.
    Png16 { divisor: f64 },
    /// Single-channel PFM in meters.
    Pfm,
}

impl DepthFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            DepthFormat::Png16 { .. } => "png",
            DepthFormat::Pfm => "pfm",
        }
    }

    pub fn read(&self, path: &Path) -> Result<DepthMap> {
        match *self {
            DepthFormat::Png16 { divisor } => read_depth_png16(path, divisor),
            DepthFormat::Pfm => read_pfm(path),
        }
    }

    pub fn write(&self, path: &Path, depth: &DepthMap) -> Result<()> {
        match *self {
            DepthFormat::Png16 { divisor } => write_depth_png16(path, depth, divisor),
            DepthFormat::Pfm => write_pfm(path, depth),
        }
    }
}

pub fn read_depth_png16(path: &Path, divisor: f64) -> Result<DepthMap> {
    if !(divisor > 0.0) {
        return Err(Error::InvalidParameter(format!("depth divisor must be positive, got {divisor}")));
    }
    let bytes = read_bytes(path)?;
    let img = image::load_from_memory_with_format(&bytes, ImageFormat::Png).map_err(|e| decode_err(path, e))?;
    let DynamicImage::ImageLuma16(raw) = img else {
        return Err(decode_err(path, format!("expected 16-bit grayscale, found {:?}", img.color())));
    };
    let (w, h) = (raw.width() as usize, raw.height() as usize);
    let values = raw.as_raw().iter().map(|&v| f64::from(v) / divisor).collect();
    DepthMap::new(w, h, values)
}

pub fn encode_depth_png16(depth: &DepthMap, divisor: f64) -> Result<Vec<u8>> {
    if !(divisor > 0.0) {
        return Err(Error::InvalidParameter(format!("depth divisor must be positive, got {divisor}")));
    }
    let samples: Vec<u16> = depth
        .values()
        .iter()
        .zip(depth.valid())
        .map(|(&v, &ok)| if ok { (v * divisor).round().clamp(0.0, 65535.0) as u16 } else { 0 })
        .collect();
    let img = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(depth.width() as u32, depth.height() as u32, samples)
        .ok_or_else(|| Error::Shape("depth buffer does not match its dimensions".into()))?;
    let mut out = std::io::Cursor::new(Vec::new());
    DynamicImage::ImageLuma16(img)
        .write_to(&mut out, ImageFormat::Png)
        .map_err(|e| Error::InvalidRequest(format!("PNG encoding failed: {e}")))?;
    Ok(out.into_inner())
}

pub fn write_depth_png16(path: &Path, depth: &DepthMap, divisor: f64) -> Result<()> {
    write_atomic(path, &encode_depth_png16(depth, divisor)?)
}

fn pfm_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a str> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    std::str::from_utf8(&bytes[start..*pos]).ok().filter(|t| !t.is_empty())
}

/// Parses a PFM. Color files keep their first channel. Rows are stored
/// bottom-up; the result is top-down.
pub fn decode_pfm(bytes: &[u8]) -> std::result::Result<DepthMap, String> {
    let mut pos = 0;
    let channels = match pfm_token(bytes, &mut pos) {
        Some("Pf") => 1,
        Some("PF") => 3,
        other => return Err(format!("bad PFM magic {other:?}")),
    };
    let mut num = |what: &str| {
        pfm_token(bytes, &mut pos)
            .ok_or_else(|| format!("missing PFM {what}"))
            .map(str::to_string)
    };
    let w: usize = num("width")?.parse().map_err(|e| format!("PFM width: {e}"))?;
    let h: usize = num("height")?.parse().map_err(|e| format!("PFM height: {e}"))?;
    let scale: f64 = num("scale")?.parse().map_err(|e| format!("PFM scale: {e}"))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(format!("PFM scale {scale} is not usable"));
    }
    // exactly one whitespace byte separates the header from the data
    let data = &bytes[(pos + 1).min(bytes.len())..];
    let need = w * h * channels * 4;
    if data.len() < need {
        return Err(format!("PFM data holds {} bytes, expected {need}", data.len()));
    }
    let little = scale < 0.0;
    let mut values = vec![0.0; w * h];
    for row in 0..h {
        let y = h - 1 - row;
        for x in 0..w {
            let at = ((row * w + x) * channels) * 4;
            let b = [data[at], data[at + 1], data[at + 2], data[at + 3]];
            let v = if little { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) };
            values[y * w + x] = f64::from(v);
        }
    }
    DepthMap::new(w, h, values).map_err(|e| e.to_string())
}

pub fn read_pfm(path: &Path) -> Result<DepthMap> {
    decode_pfm(&read_bytes(path)?).map_err(|m| decode_err(path, m))
}

/// Single-channel little-endian PFM. Invalid pixels are written as 0.
pub fn encode_pfm(depth: &DepthMap) -> Vec<u8> {
    let (w, h) = (depth.width(), depth.height());
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 4);
    for y in (0..h).rev() {
        for x in 0..w {
            let i = y * w + x;
            let v = if depth.valid()[i] { depth.values()[i] as f32 } else { 0.0 };
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn write_pfm(path: &Path, depth: &DepthMap) -> Result<()> {
    write_atomic(path, &encode_pfm(depth))
}
