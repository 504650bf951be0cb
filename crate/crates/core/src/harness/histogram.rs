//! Per-channel pixel histograms, for comparing synthetic and real corruptions.

use std::path::Path;

use super::generate::list_images;
use super::io::read_rgb;
use crate::error::{Error, Result};
use crate::imagecore::ImageBuffer;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bins: usize,
    counts: [Vec<u64>; 3],
    images: usize,
}

impl Histogram {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidParameter("histogram needs at least one bin".into()));
        }
        Ok(Histogram {
            bins,
            counts: [vec![0; bins], vec![0; bins], vec![0; bins]],
            images: 0,
        })
    }

    /// Bin of a unit-range sample; values at or above 1 land in the last bin.
    pub fn bin_of(&self, v: f32) -> usize {
        ((f64::from(v.clamp(0.0, 1.0)) * self.bins as f64) as usize).min(self.bins - 1)
    }

    pub fn add(&mut self, img: &ImageBuffer) {
        for px in img.data().chunks_exact(3) {
            for (c, &v) in px.iter().enumerate() {
                let b = self.bin_of(v);
                self.counts[c][b] += 1;
            }
        }
        self.images += 1;
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn images(&self) -> usize {
        self.images
    }

    pub fn channel(&self, c: usize) -> &[u64] {
        &self.counts[c]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Variance of bin centers under the channel's histogram.
    pub fn variance(&self, c: usize) -> f64 {
        let counts = &self.counts[c];
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return 0.0;
        }
        let center = |i: usize| (i as f64 + 0.5) / self.bins as f64;
        let mean = counts.iter().enumerate().map(|(i, &k)| center(i) * k as f64).sum::<f64>() / n as f64;
        counts
            .iter()
            .enumerate()
            .map(|(i, &k)| (center(i) - mean).powi(2) * k as f64)
            .sum::<f64>()
            / n as f64
    }

    /// `bin,lower,upper,r,g,b`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["bin", "lower", "upper", "r", "g", "b"])?;
        for i in 0..self.bins {
            w.write_record([
                i.to_string(),
                (i as f64 / self.bins as f64).to_string(),
                ((i + 1) as f64 / self.bins as f64).to_string(),
                self.counts[0][i].to_string(),
                self.counts[1][i].to_string(),
                self.counts[2][i].to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
    }
}

/// Histogram over every decodable image under `dir`. Undecodable files are
/// skipped with a warning.
pub fn pixel_histogram(dir: &Path, bins: usize) -> Result<Histogram> {
    let mut h = Histogram::new(bins)?;
    for rel in list_images(dir)? {
        match read_rgb(&dir.join(&rel)) {
            Ok(img) => h.add(&img),
            Err(e) => log::warn!("skipping {rel}: {e}"),
        }
    }
    if h.images == 0 {
        return Err(Error::EmptyInput(format!("no decodable images under {}", dir.display())));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_half_fills_one_bin() {
        let mut h = Histogram::new(256).unwrap();
        h.add(&ImageBuffer::filled(4, 3, 0.5));
        for c in 0..3 {
            assert_eq!(h.channel(c)[128], 12);
        }
        assert_eq!(h.total(), 36);
        assert_eq!(h.bin_of(1.0), 255);
        assert!(Histogram::new(0).is_err());
    }
}
