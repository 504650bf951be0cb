use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::kind::{CorruptionKind, Profile};
use crate::error::{Error, Result};
use crate::imagecore::fnv1a64;

const DEFAULT_TOML: &str = include_str!("../../data/severity.toml");

/// Which way a parameter moves as distortion increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
    /// Carries no ordering (e.g. glass iterations, snow flake zoom).
    Free,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub direction: Direction,
    pub min: f64,
    pub max: f64,
    pub integer: bool,
}

macro_rules! p {
    ($name:literal, $dir:expr, $min:expr, $max:expr, $int:literal) => {
        ParamSpec {
            name: $name,
            direction: $dir,
            min: $min,
            max: $max,
            integer: $int,
        }
    };
}

use Direction::{Decreasing as Dec, Free, Increasing as Inc};
const INF: f64 = f64::INFINITY;

/// Parameter schema of one kind.
pub fn schema(kind: CorruptionKind) -> &'static [ParamSpec] {
    use CorruptionKind::*;
    match kind {
        Brightness => &[p!("shift", Inc, -1.0, 1.0, false)],
        Dark => &[
            p!("scale", Dec, 0.0, 1.0, false),
            p!("gamma", Inc, 0.1, 10.0, false),
            p!("shot_lambda", Dec, 1e-6, INF, false),
            p!("read_sigma", Inc, 0.0, 1.0, false),
        ],
        Fog => &[
            p!("intensity", Inc, 0.0, INF, false),
            p!("wibbledecay", Dec, 1.0 + 1e-9, INF, false),
        ],
        Frost => &[
            p!("image_weight", Dec, 0.0, INF, false),
            p!("frost_weight", Inc, 0.0, INF, false),
        ],
        Snow => &[
            p!("flake_mean", Inc, -INF, INF, false),
            p!("flake_std", Free, 0.0, INF, false),
            p!("flake_zoom", Free, 1.0, 64.0, false),
            p!("threshold", Free, -INF, INF, false),
            p!("motion_length", Inc, 0.0, 256.0, true),
            p!("motion_sigma", Inc, 0.0, INF, false),
            p!("image_weight", Dec, 0.0, 1.0, false),
        ],
        Contrast => &[p!("factor", Dec, 0.0, INF, false)],
        DefocusBlur => &[
            p!("radius", Inc, 0.0, 256.0, false),
            p!("alias_sigma", Inc, 0.0, INF, false),
        ],
        GlassBlur => &[
            p!("sigma", Inc, 0.0, INF, false),
            p!("max_delta", Inc, 0.0, 256.0, true),
            p!("iterations", Free, 0.0, 64.0, true),
        ],
        MotionBlur => &[
            p!("length", Inc, 0.0, 256.0, true),
            p!("sigma", Inc, 0.0, INF, false),
        ],
        ZoomBlur => &[
            p!("max_zoom", Inc, 1.0, 4.0, false),
            p!("step", Free, 1e-4, 1.0, false),
        ],
        ElasticTransform => &[
            p!("alpha", Inc, 0.0, INF, false),
            p!("sigma", Free, 1e-6, INF, false),
            p!("affine", Inc, 0.0, 0.5, false),
        ],
        ColorQuant => &[p!("bits", Dec, 1.0, 8.0, true)],
        GaussianNoise => &[p!("sigma", Inc, 0.0, INF, false)],
        ImpulseNoise => &[p!("amount", Inc, 0.0, 1.0, false)],
        ShotNoise => &[p!("lambda", Dec, 1e-6, INF, false)],
        IsoNoise => &[
            p!("lambda", Dec, 1e-6, INF, false),
            p!("chroma_sigma", Inc, 0.0, INF, false),
        ],
        Pixelate => &[p!("factor", Dec, 1e-3, 1.0, false)],
        JpegCompress => &[p!("quality", Dec, 1.0, 100.0, true)],
    }
}

/// Per-kind, per-level corruption parameters.
///
/// Stored column-wise exactly as in the TOML file: `[kind] param = [l1, l2, ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeverityTable {
    kinds: BTreeMap<CorruptionKind, BTreeMap<String, Vec<f64>>>,
}

/// Parameters of one (kind, level) row.
#[derive(Debug, Clone, Copy)]
pub struct Level<'a> {
    table: &'a SeverityTable,
    kind: CorruptionKind,
    index: usize,
}

impl Level<'_> {
    /// Panics on names outside the kind's schema; tables are validated on construction.
    pub fn get(&self, name: &str) -> f64 {
        self.table.kinds[&self.kind]
            .get(name)
            .unwrap_or_else(|| panic!("{} has no parameter '{name}'", self.kind))[self.index]
    }

    pub fn get_usize(&self, name: &str) -> usize {
        self.get(name).round() as usize
    }
}

impl Default for SeverityTable {
    fn default() -> Self {
        Self::from_toml_str(DEFAULT_TOML).expect("bundled severity table is valid")
    }
}

impl SeverityTable {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: SeverityTable = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        table.validate()?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("table serializes")
    }

    /// Number of levels every kind provides.
    pub fn levels(&self) -> usize {
        self.kinds
            .values()
            .flat_map(|cols| cols.values().map(Vec::len))
            .min()
            .unwrap_or(0)
    }

    pub fn level(&self, kind: CorruptionKind, severity: u8) -> Result<Level<'_>> {
        if severity == 0 || usize::from(severity) > self.levels() {
            return Err(Error::InvalidParameter(format!(
                "severity {severity} outside 1..={} for {kind}",
                self.levels()
            )));
        }
        Ok(Level {
            table: self,
            kind,
            index: usize::from(severity) - 1,
        })
    }

    /// Overrides one cell, re-validating the whole table.
    pub fn with_param(mut self, kind: CorruptionKind, severity: u8, name: &str, value: f64) -> Result<Self> {
        let column = self
            .kinds
            .get_mut(&kind)
            .and_then(|cols| cols.get_mut(name))
            .ok_or_else(|| Error::InvalidParameter(format!("{kind} has no parameter '{name}'")))?;
        let slot = usize::from(severity)
            .checked_sub(1)
            .and_then(|i| column.get_mut(i))
            .ok_or_else(|| Error::InvalidParameter(format!("severity {severity} out of range")))?;
        *slot = value;
        self.validate()?;
        Ok(self)
    }

    pub fn check_profile(&self, profile: Profile) -> Result<()> {
        if self.levels() < usize::from(profile.levels()) {
            return Err(Error::Profile(format!(
                "severity table has {} levels, profile {profile} needs {}",
                self.levels(),
                profile.levels()
            )));
        }
        Ok(())
    }

    /// Stable 64-bit digest recorded in manifests.
    pub fn content_hash(&self) -> u64 {
        fnv1a64(serde_json::to_string(self).expect("table serializes").as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        for kind in CorruptionKind::ALL {
            let cols = self
                .kinds
                .get(&kind)
                .ok_or_else(|| Error::Config(format!("severity table lacks [{kind}]")))?;
            let spec = schema(kind);
            for name in cols.keys() {
                if !spec.iter().any(|s| s.name == name) {
                    return Err(Error::Config(format!("unknown parameter {kind}.{name}")));
                }
            }
            let mut len = None;
            for s in spec {
                let col = cols
                    .get(s.name)
                    .ok_or_else(|| Error::Config(format!("missing parameter {kind}.{}", s.name)))?;
                if col.is_empty() || len.is_some_and(|l| l != col.len()) {
                    return Err(Error::Config(format!("{kind}.{} has a ragged level list", s.name)));
                }
                len = Some(col.len());
                for &v in col {
                    if !v.is_finite() || v < s.min || v > s.max {
                        return Err(Error::Config(format!(
                            "{kind}.{} = {v} outside [{}, {}]",
                            s.name, s.min, s.max
                        )));
                    }
                    if s.integer && v.fract() != 0.0 {
                        return Err(Error::Config(format!("{kind}.{} = {v} must be an integer", s.name)));
                    }
                }
                let ordered = col.windows(2).all(|w| match s.direction {
                    Direction::Increasing => w[1] >= w[0],
                    Direction::Decreasing => w[1] <= w[0],
                    Direction::Free => true,
                });
                if !ordered {
                    return Err(Error::Config(format!(
                        "{kind}.{} must be {} in severity: {col:?}",
                        s.name,
                        if s.direction == Direction::Increasing { "non-decreasing" } else { "non-increasing" }
                    )));
                }
            }
        }
        if let Some(extra) = self.kinds.keys().find(|k| !CorruptionKind::ALL.contains(k)) {
            return Err(Error::Config(format!("unexpected kind {extra}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_is_valid_and_complete() {
        let t = SeverityTable::default();
        assert_eq!(t.levels(), 5);
        assert_eq!(t.level(CorruptionKind::GaussianNoise, 1).unwrap().get("sigma"), 0.08);
        assert_eq!(t.level(CorruptionKind::JpegCompress, 5).unwrap().get_usize("quality"), 7);
        assert_eq!(t.level(CorruptionKind::GlassBlur, 3).unwrap().get_usize("iterations"), 3);
        assert!(t.level(CorruptionKind::Fog, 6).is_err());
        assert!(t.level(CorruptionKind::Fog, 0).is_err());
    }

    #[test]
    fn published_default_values() {
        let t = SeverityTable::default();
        let col = |k: CorruptionKind, n: &str| (1..=5).map(|s| t.level(k, s).unwrap().get(n)).collect::<Vec<_>>();
        assert_eq!(col(CorruptionKind::ShotNoise, "lambda"), [60.0, 25.0, 12.0, 5.0, 3.0]);
        assert_eq!(col(CorruptionKind::ImpulseNoise, "amount"), [0.03, 0.06, 0.09, 0.17, 0.27]);
        assert_eq!(col(CorruptionKind::ZoomBlur, "max_zoom"), [1.11, 1.16, 1.21, 1.26, 1.31]);
        assert_eq!(col(CorruptionKind::Contrast, "factor"), [0.4, 0.3, 0.2, 0.1, 0.05]);
        assert_eq!(col(CorruptionKind::Pixelate, "factor"), [0.6, 0.5, 0.4, 0.3, 0.25]);
        assert_eq!(col(CorruptionKind::ColorQuant, "bits"), [5.0, 4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn toml_round_trip_preserves_hash() {
        let t = SeverityTable::default();
        let again = SeverityTable::from_toml_str(&t.to_toml_string()).unwrap();
        assert_eq!(t, again);
        assert_eq!(t.content_hash(), again.content_hash());
    }

    #[test]
    fn overrides_are_validated() {
        let t = SeverityTable::default();
        let zero = t.clone().with_param(CorruptionKind::GaussianNoise, 1, "sigma", 0.0).unwrap();
        assert_eq!(zero.level(CorruptionKind::GaussianNoise, 1).unwrap().get("sigma"), 0.0);
        assert_ne!(zero.content_hash(), t.content_hash());
        // breaks the increasing order
        assert!(t.clone().with_param(CorruptionKind::GaussianNoise, 1, "sigma", 0.5).is_err());
        assert!(t.clone().with_param(CorruptionKind::ColorQuant, 1, "bits", 4.5).is_err());
        assert!(t.with_param(CorruptionKind::GaussianNoise, 1, "amount", 0.1).is_err());
    }

    #[test]
    fn rejects_unknown_and_missing_entries() {
        let bad = DEFAULT_TOML.replace("[pixelate]\nfactor", "[pixelate]\nfactr");
        assert!(matches!(SeverityTable::from_toml_str(&bad), Err(Error::Config(_))));
        let missing = DEFAULT_TOML.replace("[jpeg_compress]", "[jpeg_compress_x]");
        assert!(SeverityTable::from_toml_str(&missing).is_err());
    }

    #[test]
    fn indoor_profile_fits_five_level_table() {
        let t = SeverityTable::default();
        assert!(t.check_profile(Profile::Indoor4).is_ok());
        assert!(t.check_profile(Profile::Outdoor5).is_ok());
    }
}
