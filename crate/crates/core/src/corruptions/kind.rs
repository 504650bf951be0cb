use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three top-level corruption groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    WeatherLighting,
    SensorMovement,
    DataProcessing,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::WeatherLighting,
        Category::SensorMovement,
        Category::DataProcessing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::WeatherLighting => "weather_lighting",
            Category::SensorMovement => "sensor_movement",
            Category::DataProcessing => "data_processing",
        }
    }

    pub fn kinds(self) -> impl Iterator<Item = CorruptionKind> {
        CorruptionKind::ALL.into_iter().filter(move |k| k.category() == self)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Implementation family a kind dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Noise,
    Blur,
    Weather,
    Tone,
    Digital,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorruptionKind {
    Brightness,
    Dark,
    Fog,
    Frost,
    Snow,
    Contrast,
    DefocusBlur,
    GlassBlur,
    MotionBlur,
    ZoomBlur,
    ElasticTransform,
    ColorQuant,
    GaussianNoise,
    ImpulseNoise,
    ShotNoise,
    IsoNoise,
    Pixelate,
    JpegCompress,
}

impl CorruptionKind {
    /// Canonical order, which is also the column order of the result tables.
    pub const ALL: [CorruptionKind; 18] = [
        CorruptionKind::Brightness,
        CorruptionKind::Dark,
        CorruptionKind::Fog,
        CorruptionKind::Frost,
        CorruptionKind::Snow,
        CorruptionKind::Contrast,
        CorruptionKind::DefocusBlur,
        CorruptionKind::GlassBlur,
        CorruptionKind::MotionBlur,
        CorruptionKind::ZoomBlur,
        CorruptionKind::ElasticTransform,
        CorruptionKind::ColorQuant,
        CorruptionKind::GaussianNoise,
        CorruptionKind::ImpulseNoise,
        CorruptionKind::ShotNoise,
        CorruptionKind::IsoNoise,
        CorruptionKind::Pixelate,
        CorruptionKind::JpegCompress,
    ];

    /// Stable byte id used in seed derivation. Never renumber.
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            CorruptionKind::Brightness => "brightness",
            CorruptionKind::Dark => "dark",
            CorruptionKind::Fog => "fog",
            CorruptionKind::Frost => "frost",
            CorruptionKind::Snow => "snow",
            CorruptionKind::Contrast => "contrast",
            CorruptionKind::DefocusBlur => "defocus_blur",
            CorruptionKind::GlassBlur => "glass_blur",
            CorruptionKind::MotionBlur => "motion_blur",
            CorruptionKind::ZoomBlur => "zoom_blur",
            CorruptionKind::ElasticTransform => "elastic_transform",
            CorruptionKind::ColorQuant => "color_quant",
            CorruptionKind::GaussianNoise => "gaussian_noise",
            CorruptionKind::ImpulseNoise => "impulse_noise",
            CorruptionKind::ShotNoise => "shot_noise",
            CorruptionKind::IsoNoise => "iso_noise",
            CorruptionKind::Pixelate => "pixelate",
            CorruptionKind::JpegCompress => "jpeg_compress",
        }
    }

    pub fn category(self) -> Category {
        use CorruptionKind::*;
        match self {
            Brightness | Dark | Fog | Frost | Snow | Contrast => Category::WeatherLighting,
            DefocusBlur | GlassBlur | MotionBlur | ZoomBlur | ElasticTransform | ColorQuant => {
                Category::SensorMovement
            }
            GaussianNoise | ImpulseNoise | ShotNoise | IsoNoise | Pixelate | JpegCompress => {
                Category::DataProcessing
            }
        }
    }

    pub fn family(self) -> Family {
        use CorruptionKind::*;
        match self {
            GaussianNoise | ShotNoise | ImpulseNoise | IsoNoise => Family::Noise,
            DefocusBlur | GlassBlur | MotionBlur | ZoomBlur => Family::Blur,
            Fog | Frost | Snow => Family::Weather,
            Brightness | Dark | Contrast => Family::Tone,
            ElasticTransform | ColorQuant | Pixelate | JpegCompress => Family::Digital,
        }
    }
}

impl fmt::Display for CorruptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorruptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "defocus" => "defocus_blur",
            "glass" => "glass_blur",
            "motion" => "motion_blur",
            "zoom" => "zoom_blur",
            "elastic" => "elastic_transform",
            "quant" | "color_quantization" => "color_quant",
            "gaussian" => "gaussian_noise",
            "impulse" => "impulse_noise",
            "shot" => "shot_noise",
            "iso" => "iso_noise",
            "jpeg" => "jpeg_compress",
            other => other,
        };
        CorruptionKind::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| Error::UnsupportedKind(s.to_string()))
    }
}

/// Severity layout of a benchmark variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Profile {
    /// Five levels, all 18 kinds (street-scene benchmark).
    #[serde(rename = "outdoor-5")]
    Outdoor5,
    /// Four levels, the 15 kinds without fog, frost and snow (indoor benchmark).
    #[serde(rename = "indoor-4")]
    Indoor4,
}

impl Profile {
    pub fn levels(self) -> u8 {
        match self {
            Profile::Outdoor5 => 5,
            Profile::Indoor4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Outdoor5 => "outdoor-5",
            Profile::Indoor4 => "indoor-4",
        }
    }

    pub fn default_kinds(self) -> Vec<CorruptionKind> {
        match self {
            Profile::Outdoor5 => CorruptionKind::ALL.to_vec(),
            Profile::Indoor4 => CorruptionKind::ALL
                .into_iter()
                .filter(|k| {
                    !matches!(k, CorruptionKind::Fog | CorruptionKind::Frost | CorruptionKind::Snow)
                })
                .collect(),
        }
    }

    pub fn check_severity(self, severity: u8) -> Result<()> {
        if severity == 0 || severity > self.levels() {
            return Err(Error::InvalidParameter(format!(
                "severity {severity} outside 1..={} for profile {}",
                self.levels(),
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outdoor-5" | "outdoor" => Ok(Profile::Outdoor5),
            "indoor-4" | "indoor" => Ok(Profile::Indoor4),
            other => Err(Error::InvalidParameter(format!(
                "unknown profile '{other}' (expected outdoor-5 or indoor-4)"
            ))),
        }
    }
}

/// One corrupted rendering of one image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub kind: CorruptionKind,
    pub severity: u8,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn new(kind: CorruptionKind, severity: u8, seed: u64) -> Self {
        CorruptionSpec { kind, severity, seed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categories_partition_six_six_six() {
        for cat in Category::ALL {
            assert_eq!(cat.kinds().count(), 6, "{cat}");
        }
        let weather: Vec<_> = Category::WeatherLighting.kinds().map(|k| k.name()).collect();
        assert_eq!(weather, ["brightness", "dark", "fog", "frost", "snow", "contrast"]);
        let sensor: Vec<_> = Category::SensorMovement.kinds().map(|k| k.name()).collect();
        assert_eq!(
            sensor,
            ["defocus_blur", "glass_blur", "motion_blur", "zoom_blur", "elastic_transform", "color_quant"]
        );
    }

    #[test]
    fn ids_are_stable() {
        for (i, k) in CorruptionKind::ALL.into_iter().enumerate() {
            assert_eq!(k.id() as usize, i);
        }
    }

    #[test]
    fn names_round_trip() {
        for k in CorruptionKind::ALL {
            assert_eq!(k.name().parse::<CorruptionKind>().unwrap(), k);
        }
        assert_eq!("jpeg".parse::<CorruptionKind>().unwrap(), CorruptionKind::JpegCompress);
        assert!(matches!("rain".parse::<CorruptionKind>(), Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn indoor_profile_drops_weather_kinds() {
        let kinds = Profile::Indoor4.default_kinds();
        assert_eq!(kinds.len(), 15);
        assert!(!kinds.contains(&CorruptionKind::Snow));
        assert!(Profile::Indoor4.check_severity(5).is_err());
        assert!(Profile::Outdoor5.check_severity(5).is_ok());
        assert!(Profile::Outdoor5.check_severity(0).is_err());
    }
}
