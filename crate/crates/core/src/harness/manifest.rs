//! The record of a generated corrupted dataset.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corruptions::{CorruptionKind, Profile};
use crate::error::{Error, Result};
use crate::imagecore::fnv1a64;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

/// 64-bit values as `0x`-prefixed hex so JSON readers never round them.
pub(crate) mod hex64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:#018x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }

    pub fn parse(s: &str) -> Result<u64, String> {
        let digits = s.strip_prefix("0x").ok_or_else(|| format!("expected 0x-prefixed hex, got {s}"))?;
        u64::from_str_radix(digits, 16).map_err(|e| format!("{s}: {e}"))
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::parse(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path of the clean image relative to the clean root, `/`-separated.
    pub relative_path: String,
    pub kind: CorruptionKind,
    pub severity: u8,
    #[serde(with = "hex64")]
    pub derived_seed: u64,
    /// Path of the corrupted image relative to the output root.
    pub output_path: String,
    /// Absent for dry runs, which emit no files.
    #[serde(with = "hex64::option")]
    pub content_hash: Option<u64>,
}

impl ManifestEntry {
    pub fn key(&self) -> (u8, u8, &str) {
        (self.kind.id(), self.severity, &self.relative_path)
    }
}

/// `<kind>/<severity>/<relative_path>` with a `.png` extension.
pub fn output_path_for(relative_path: &str, kind: CorruptionKind, severity: u8) -> String {
    format!("{}/{severity}/{}", kind.name(), with_extension(relative_path, "png"))
}

pub(crate) fn with_extension(relative_path: &str, ext: &str) -> String {
    let name_start = relative_path.rfind('/').map_or(0, |i| i + 1);
    match relative_path[name_start..].rfind('.') {
        Some(dot) if dot > 0 => format!("{}.{ext}", &relative_path[..name_start + dot]),
        _ => format!("{relative_path}.{ext}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub base_dataset: String,
    /// Clean root as given at generation time.
    pub clean_root: String,
    pub profile: Profile,
    pub seed_root: u64,
    pub kinds: Vec<CorruptionKind>,
    pub severities: Vec<u8>,
    pub image_count: usize,
    #[serde(with = "hex64")]
    pub severity_table_hash: u64,
    #[serde(with = "hex64")]
    pub frost_asset_hash: u64,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Probe {
            schema_version: u32,
        }
        let probe: Probe = serde_json::from_str(text)?;
        if probe.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                expected: MANIFEST_SCHEMA_VERSION,
                found: probe.schema_version,
            });
        }
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        super::io::write_atomic(path, self.to_json()?.as_bytes())
    }

    /// FNV-1a of the canonical JSON form.
    pub fn content_hash(&self) -> Result<u64> {
        Ok(fnv1a64(self.to_json()?.as_bytes()))
    }

    /// Distinct relative paths in sorted order.
    pub fn images(&self) -> Vec<String> {
        let mut v: Vec<String> = self.entries.iter().map(|e| e.relative_path.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Distinct `(kind, severity)` cells in canonical order.
    pub fn cells(&self) -> Vec<(CorruptionKind, u8)> {
        let mut v: Vec<(CorruptionKind, u8)> = self.entries.iter().map(|e| (e.kind, e.severity)).collect();
        v.sort_by_key(|&(k, s)| (k.id(), s));
        v.dedup();
        v
    }
}
