use crate::error::{Error, Result};

/// Interleaved RGB raster with float samples in `[0, 1]`.
///
/// Intermediate results (downsampled pixelate stages, small test rasters)
/// may be smaller than [`ImageBuffer::MIN_CORRUPTION_SIDE`]; the corruption
/// entry points enforce that minimum on their inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl ImageBuffer {
    pub const CHANNELS: usize = 3;
    /// Smallest side accepted by the fractal and blur kernels.
    pub const MIN_CORRUPTION_SIDE: usize = 8;

    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height * Self::CHANNELS {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples for {width}x{height} RGB, got {}",
                width * height * Self::CHANNELS,
                data.len()
            )));
        }
        let mut img = ImageBuffer {
            width,
            height,
            data,
        };
        img.clamp();
        Ok(img)
    }

    pub fn filled(width: usize, height: usize, value: f32) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        ImageBuffer {
            width,
            height,
            data: vec![value.clamp(0.0, 1.0); width * height * Self::CHANNELS],
        }
    }

    /// Builds an image by evaluating `f(x, y, channel)` for every sample.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize, usize) -> f32) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height * Self::CHANNELS);
        for y in 0..height {
            for x in 0..width {
                for c in 0..Self::CHANNELS {
                    data.push(f(x, y, c).clamp(0.0, 1.0));
                }
            }
        }
        ImageBuffer {
            width,
            height,
            data,
        }
    }

    /// Converts 8-bit RGB samples with `v / 255`.
    pub fn from_rgb8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        let data = bytes.iter().map(|&b| f32::from(b) / 255.0).collect();
        Self::new(width, height, data)
    }

    /// Quantizes to 8-bit with `round(v * 255)`.
    pub fn to_rgb8(&self) -> Vec<u8> {
        self.data.iter().map(|&v| to_u8(v)).collect()
    }

    /// Round-trips through 8-bit storage.
    pub fn quantized_8bit(&self) -> Self {
        ImageBuffer {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f32::from(to_u8(v)) / 255.0).collect(),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        Self::CHANNELS
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * Self::CHANNELS + c
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[self.index(x, y, c)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f32) {
        let i = self.index(x, y, c);
        self.data[i] = v;
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f32; 3] {
        let i = self.index(x, y, 0);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [f32; 3]) {
        let i = self.index(x, y, 0);
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Clamps every sample into `[0, 1]`; NaN becomes 0.
    pub fn clamp(&mut self) {
        for v in &mut self.data {
            *v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        }
    }

    pub fn map(&self, f: impl Fn(f32) -> f32) -> Self {
        let mut out = ImageBuffer {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        };
        out.clamp();
        out
    }

    pub fn max_sample(&self) -> f32 {
        self.data.iter().copied().fold(0.0, f32::max)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| f64::from(v)).sum::<f64>() / self.data.len() as f64
    }

    pub fn channel_means(&self) -> [f64; 3] {
        let mut sums = [0.0f64; 3];
        for px in self.data.chunks_exact(3) {
            for c in 0..3 {
                sums[c] += f64::from(px[c]);
            }
        }
        let n = (self.width * self.height) as f64;
        sums.map(|s| s / n)
    }

    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let var = self
            .data
            .iter()
            .map(|&v| (f64::from(v) - m).powi(2))
            .sum::<f64>()
            / self.data.len() as f64;
        var.sqrt()
    }

    /// Rec. 601 luma per pixel.
    pub fn luma(&self) -> Vec<f32> {
        self.data
            .chunks_exact(3)
            .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
            .collect()
    }

    /// Rotates by 180 degrees.
    pub fn rotated_180(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for px in self.data.chunks_exact(3).rev() {
            data.extend_from_slice(px);
        }
        ImageBuffer {
            width: self.width,
            height: self.height,
            data,
        }
    }

    pub(crate) fn require_corruption_size(&self) -> Result<()> {
        if self.width < Self::MIN_CORRUPTION_SIDE || self.height < Self::MIN_CORRUPTION_SIDE {
            return Err(Error::InvalidParameter(format!(
                "image is {}x{}, corruption kernels need at least {}x{}",
                self.width,
                self.height,
                Self::MIN_CORRUPTION_SIDE,
                Self::MIN_CORRUPTION_SIDE
            )));
        }
        Ok(())
    }
}

#[inline]
fn to_u8(v: f32) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Single-channel float raster (fractal fields, flake layers, displacement maps).
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f32>,
}

impl Plane {
    pub fn new(width: usize, height: usize) -> Self {
        Plane {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f32) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Plane {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f32) {
        self.data[y * self.width + x] = v;
    }

    pub fn min_max(&self) -> (f32, f32) {
        self.data
            .iter()
            .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn rotated_180(&self) -> Self {
        Plane {
            width: self.width,
            height: self.height,
            data: self.data.iter().rev().copied().collect(),
        }
    }

    /// Copies one channel of an image.
    pub fn from_channel(img: &ImageBuffer, c: usize) -> Self {
        Plane {
            width: img.width(),
            height: img.height(),
            data: img.data().chunks_exact(3).map(|p| p[c]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_lengths() {
        assert!(ImageBuffer::new(2, 2, vec![0.0; 11]).is_err());
        assert!(ImageBuffer::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn new_clamps_samples() {
        let img = ImageBuffer::new(1, 1, vec![-0.5, 0.5, 2.0]).unwrap();
        assert_eq!(img.data(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn eight_bit_round_trip_is_exact() {
        let bytes: Vec<u8> = (0..=255u8).cycle().take(16 * 16 * 3).collect();
        let img = ImageBuffer::from_rgb8(16, 16, &bytes).unwrap();
        assert_eq!(img.to_rgb8(), bytes);
    }

    #[test]
    fn rotation_twice_is_identity() {
        let img = ImageBuffer::from_fn(5, 3, |x, y, c| (x * 7 + y * 3 + c) as f32 / 40.0);
        assert_eq!(img.rotated_180().rotated_180(), img);
        assert_eq!(img.rotated_180().pixel(0, 0), img.pixel(4, 2));
    }
}
