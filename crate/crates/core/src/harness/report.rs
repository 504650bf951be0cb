//! Report documents and their CSV side tables.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::evaluate::Evaluation;
use super::manifest::hex64;
use crate::corruptions::{Category, Profile};
use crate::depthmetrics::EvalProtocol;
use crate::error::{Error, Result};
use crate::robustness::{summarize, BaselineTable, DeeCell, KindId, RobustnessReport};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub baseline_id: String,
    pub profile: Option<Profile>,
    #[serde(with = "hex64::option")]
    pub manifest_hash: Option<u64>,
    pub protocol: Option<EvalProtocol>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentedKind {
    pub kind: KindId,
    pub ce: f64,
    pub rr: f64,
    pub mean_dee: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentedCategory {
    pub category: Category,
    pub mce: f64,
    pub mrr: f64,
    pub mdee: f64,
}

/// Table-style rounding: percentages to 1 decimal, DEE to 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Presentation {
    pub mce: f64,
    pub mrr: f64,
    pub mdee: f64,
    pub clean_dee: f64,
    pub kinds: Vec<PresentedKind>,
    pub categories: Vec<PresentedCategory>,
}

pub fn round_percent(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

pub fn round_dee(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

impl Presentation {
    fn of(r: &RobustnessReport) -> Self {
        Presentation {
            mce: round_percent(r.mce),
            mrr: round_percent(r.mrr),
            mdee: round_dee(r.mdee),
            clean_dee: round_dee(r.clean_dee),
            kinds: r
                .kinds
                .iter()
                .map(|k| PresentedKind {
                    kind: k.kind.clone(),
                    ce: round_percent(k.ce),
                    rr: round_percent(k.rr),
                    mean_dee: round_dee(k.mean_dee),
                })
                .collect(),
            categories: r
                .categories
                .iter()
                .map(|c| PresentedCategory {
                    category: c.category,
                    mce: round_percent(c.mce),
                    mrr: round_percent(c.mrr),
                    mdee: round_dee(c.mdee),
                })
                .collect(),
        }
    }
}

/// Full-precision report plus the per-severity cells it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub report: RobustnessReport,
    pub cells: Vec<DeeCell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    pub presentation: Presentation,
}

fn check_profile(baseline: &BaselineTable, profile: Profile) -> Result<()> {
    if baseline.levels() != profile.levels() {
        return Err(Error::Profile(format!(
            "baseline {} has {} levels, profile {profile} has {}",
            baseline.model_id(),
            baseline.levels(),
            profile.levels()
        )));
    }
    let builtin: Vec<KindId> = baseline
        .kinds()
        .into_iter()
        .filter(|k| matches!(k, KindId::Builtin(_)))
        .collect();
    let expected: Vec<KindId> = profile.default_kinds().into_iter().map(KindId::Builtin).collect();
    if builtin != expected {
        return Err(Error::Profile(format!(
            "baseline {} covers {} built-in kinds, profile {profile} has {}",
            baseline.model_id(),
            builtin.len(),
            expected.len()
        )));
    }
    Ok(())
}

/// Summarizes `cells` against `baseline` into a document.
pub fn build_report(
    cells: &[DeeCell],
    clean_dee: f64,
    baseline: &BaselineTable,
    profile: Option<Profile>,
) -> Result<ReportDocument> {
    if let Some(p) = profile {
        check_profile(baseline, p)?;
    }
    let report = summarize(cells, baseline, clean_dee)?;
    let mut cells = cells.to_vec();
    cells.sort_by(|a, b| (&a.kind, a.severity).cmp(&(&b.kind, b.severity)));
    Ok(ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION,
        provenance: Provenance {
            tool: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            baseline_id: baseline.model_id().to_string(),
            profile,
            manifest_hash: None,
            protocol: None,
        },
        presentation: Presentation::of(&report),
        report,
        cells,
        evaluation: None,
    })
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

impl ReportDocument {
    pub fn with_manifest_hash(mut self, hash: u64) -> Self {
        self.provenance.manifest_hash = Some(hash);
        self
    }

    pub fn with_protocol(mut self, proto: EvalProtocol) -> Self {
        self.provenance.protocol = Some(proto);
        self
    }

    pub fn with_evaluation(mut self, evaluation: Evaluation) -> Self {
        self.evaluation = Some(evaluation);
        self
    }

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
        if probe.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                expected: REPORT_SCHEMA_VERSION,
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

    /// Kinds by severity, plus the severity mean.
    pub fn dee_matrix_csv(&self) -> Result<String> {
        let levels = self.report.levels;
        let mut header = vec!["kind".to_string()];
        header.extend((1..=levels).map(|s| format!("severity_{s}")));
        header.push("mean".into());
        let rows = self.report.kinds.iter().map(|k| {
            let mut row = vec![k.kind.to_string()];
            row.extend(k.curve.iter().map(f64::to_string));
            row.push(k.mean_dee.to_string());
            row
        });
        csv_string(std::iter::once(header).chain(rows))
    }

    pub fn ce_rr_csv(&self) -> Result<String> {
        let header = ["kind", "category", "ce", "rr", "mean_dee"].map(String::from).to_vec();
        let rows = self.report.kinds.iter().map(|k| {
            vec![
                k.kind.to_string(),
                k.category.map_or_else(String::new, |c| c.name().to_string()),
                k.ce.to_string(),
                k.rr.to_string(),
                k.mean_dee.to_string(),
            ]
        });
        csv_string(std::iter::once(header).chain(rows))
    }

    /// Category rollups followed by an `overall` row.
    pub fn categories_csv(&self) -> Result<String> {
        let header = ["category", "mce", "mrr", "mdee"].map(String::from).to_vec();
        let r = &self.report;
        let rows = r
            .categories
            .iter()
            .map(|c| vec![c.category.name().to_string(), c.mce.to_string(), c.mrr.to_string(), c.mdee.to_string()])
            .chain(std::iter::once(vec![
                "overall".to_string(),
                r.mce.to_string(),
                r.mrr.to_string(),
                r.mdee.to_string(),
            ]));
        csv_string(std::iter::once(header).chain(rows))
    }

    /// Long `kind,severity,dee` rows, severity on the plotting x-axis.
    pub fn curves_csv(&self) -> Result<String> {
        let header = ["kind", "severity", "dee"].map(String::from).to_vec();
        let rows = self.report.kinds.iter().flat_map(|k| {
            k.curve
                .iter()
                .enumerate()
                .map(|(i, d)| vec![k.kind.to_string(), (i + 1).to_string(), d.to_string()])
                .collect::<Vec<_>>()
        });
        csv_string(std::iter::once(header).chain(rows))
    }

    /// Writes `report.json` and the four CSV tables into `dir`.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let files = [
            ("report.json", self.to_json()?),
            ("dee_matrix.csv", self.dee_matrix_csv()?),
            ("ce_rr.csv", self.ce_rr_csv()?),
            ("categories.csv", self.categories_csv()?),
            ("severity_curves.csv", self.curves_csv()?),
        ];
        files
            .into_iter()
            .map(|(name, body)| {
                let path = dir.join(name);
                super::io::write_atomic(&path, body.as_bytes())?;
                Ok(path)
            })
            .collect()
    }
}
