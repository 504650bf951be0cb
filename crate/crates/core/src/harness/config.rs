//! One TOML document with everything a run needs besides paths.
//!
//! ```toml
//! profile = "outdoor-5"
//! severity_table = "tables/severity.toml"   # optional, bundled default
//! frost_assets = "assets/frost"              # optional, procedural default
//! baseline = "baselines/mine.csv"            # optional, bundled default
//! seed_root = 17
//! jobs = 8
//!
//! [protocol]
//! min_depth = 0.001
//! max_depth = 80.0
//! median_scaling = true
//! crop = { type = "fraction", top = 0.40810811, bottom = 0.99189189, left = 0.03594771, right = 0.96405229 }
//!
//! [ground_truth]
//! type = "png16"
//! divisor = 256.0
//!
//! [prediction]
//! type = "pfm"
//! ```
//!
//! Relative paths resolve against the directory holding the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::generate::load_frost_assets;
use super::io::DepthFormat;
use super::tables::{load_baseline, shipped_baseline};
use crate::corruptions::{CorruptionContext, FrostSource, Profile, SeverityTable};
use crate::depthmetrics::EvalProtocol;
use crate::error::{Error, Result};
use crate::robustness::BaselineTable;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MDEROBUST_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    profile: Option<Profile>,
    severity_table: Option<PathBuf>,
    frost_assets: Option<PathBuf>,
    baseline: Option<PathBuf>,
    seed_root: Option<u64>,
    jobs: Option<usize>,
    protocol: Option<EvalProtocol>,
    ground_truth: Option<DepthFormat>,
    prediction: Option<DepthFormat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub profile: Profile,
    pub severity_table: Option<PathBuf>,
    pub frost_assets: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
    pub seed_root: u64,
    pub jobs: usize,
    pub protocol: EvalProtocol,
    pub ground_truth: DepthFormat,
    pub prediction: DepthFormat,
}

impl Config {
    /// Defaults of a profile: street-scene protocol and /256 depth PNGs
    /// outdoors, indoor protocol and /1000 depth PNGs indoors.
    pub fn for_profile(profile: Profile) -> Self {
        let (protocol, divisor) = match profile {
            Profile::Outdoor5 => (EvalProtocol::kitti(), 256.0),
            Profile::Indoor4 => (EvalProtocol::nyu(), 1000.0),
        };
        Config {
            profile,
            severity_table: None,
            frost_assets: None,
            baseline: None,
            seed_root: 0,
            jobs: 1,
            protocol,
            ground_truth: DepthFormat::Png16 { divisor },
            prediction: DepthFormat::Png16 { divisor },
        }
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Config::for_profile(raw.profile.unwrap_or(Profile::Outdoor5));
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
        cfg.severity_table = raw.severity_table.map(resolve);
        cfg.frost_assets = raw.frost_assets.map(resolve);
        cfg.baseline = raw.baseline.map(resolve);
        if let Some(s) = raw.seed_root {
            cfg.seed_root = s;
        }
        if let Some(j) = raw.jobs {
            cfg.jobs = j.max(1);
        }
        if let Some(p) = raw.protocol {
            cfg.protocol = EvalProtocol::new(p.min_depth, p.max_depth, p.crop, p.median_scaling)
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        if let Some(f) = raw.ground_truth {
            cfg.ground_truth = f;
        }
        if let Some(f) = raw.prediction {
            cfg.prediction = f;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn severity_table(&self) -> Result<SeverityTable> {
        let table = match &self.severity_table {
            Some(p) => SeverityTable::load(p)?,
            None => SeverityTable::default(),
        };
        table.check_profile(self.profile)?;
        Ok(table)
    }

    pub fn corruption_context(&self) -> Result<CorruptionContext> {
        let frost = match &self.frost_assets {
            Some(dir) => load_frost_assets(dir)?,
            None => FrostSource::Procedural,
        };
        Ok(CorruptionContext::new(self.severity_table()?, frost))
    }

    pub fn baseline(&self) -> Result<BaselineTable> {
        match &self.baseline {
            Some(p) => load_baseline(p),
            None => Ok(shipped_baseline(self.profile)),
        }
    }
}
