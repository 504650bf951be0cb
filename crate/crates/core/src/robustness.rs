//! Corruption error (CE), resilience rate (RR) and their rollups.
//!
//! CE for one corruption is the model's summed DEE over severities relative
//! to a baseline model's; RR is the accuracy `1 - DEE` retained relative to
//! the clean set. mCE and mRR average over corruptions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corruptions::{Category, CorruptionKind};
use crate::error::{Error, Result};

/// A built-in corruption or an externally produced one (`style:<name>`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KindId {
    Builtin(CorruptionKind),
    Style(String),
}

impl KindId {
    pub fn category(&self) -> Option<Category> {
        match self {
            KindId::Builtin(k) => Some(k.category()),
            KindId::Style(_) => None,
        }
    }
}

impl From<CorruptionKind> for KindId {
    fn from(k: CorruptionKind) -> Self {
        KindId::Builtin(k)
    }
}

impl fmt::Display for KindId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KindId::Builtin(k) => f.write_str(k.name()),
            KindId::Style(name) => write!(f, "style:{name}"),
        }
    }
}

impl FromStr for KindId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("style:") {
            Some(name) if !name.is_empty() && !name.contains(['/', '\\']) => Ok(KindId::Style(name.to_string())),
            Some(_) => Err(Error::UnsupportedKind(s.to_string())),
            None => s.parse().map(KindId::Builtin),
        }
    }
}

impl Serialize for KindId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KindId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One (model, corruption, severity) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeeCell {
    pub model_id: String,
    pub kind: KindId,
    pub severity: u8,
    pub dee: f64,
}

impl DeeCell {
    pub fn new(model_id: impl Into<String>, kind: impl Into<KindId>, severity: u8, dee: f64) -> Self {
        DeeCell {
            model_id: model_id.into(),
            kind: kind.into(),
            severity,
            dee,
        }
    }
}

/// Replicates one severity-mean DEE across `levels` cells.
pub fn replicate(model_id: &str, kind: impl Into<KindId>, levels: u8, dee: f64) -> Vec<DeeCell> {
    let kind = kind.into();
    (1..=levels).map(|s| DeeCell::new(model_id, kind.clone(), s, dee)).collect()
}

/// The reference model that normalizes CE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineTable {
    model_id: String,
    clean_dee: f64,
    levels: u8,
    cells: Vec<DeeCell>,
}

impl BaselineTable {
    /// Validates complete, rectangular coverage with positive DEE everywhere.
    pub fn new(model_id: impl Into<String>, clean_dee: f64, cells: Vec<DeeCell>) -> Result<Self> {
        let model_id = model_id.into();
        if cells.is_empty() {
            return Err(Error::DegenerateBaseline("baseline has no cells".into()));
        }
        let mut grid: BTreeMap<KindId, BTreeSet<u8>> = BTreeMap::new();
        for c in &cells {
            if c.model_id != model_id {
                return Err(Error::MisalignedCells(format!(
                    "baseline {model_id} contains a cell of {}",
                    c.model_id
                )));
            }
            if !(c.dee > 0.0) {
                return Err(Error::DegenerateBaseline(format!(
                    "{} severity {} has DEE {}",
                    c.kind, c.severity, c.dee
                )));
            }
            if !grid.entry(c.kind.clone()).or_default().insert(c.severity) {
                return Err(Error::MisalignedCells(format!("duplicate cell {}@{}", c.kind, c.severity)));
            }
        }
        let levels = grid.values().map(|s| s.len()).max().unwrap_or(0) as u8;
        for (kind, sev) in &grid {
            if sev.iter().copied().ne(1..=levels) {
                return Err(Error::MisalignedCells(format!(
                    "baseline {kind} covers severities {sev:?}, expected 1..={levels}"
                )));
            }
        }
        let mut cells = cells;
        cells.sort_by(|a, b| (&a.kind, a.severity).cmp(&(&b.kind, b.severity)));
        Ok(BaselineTable {
            model_id,
            clean_dee,
            levels,
            cells,
        })
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn clean_dee(&self) -> f64 {
        self.clean_dee
    }

    pub fn levels(&self) -> u8 {
        self.levels
    }

    pub fn cells(&self) -> &[DeeCell] {
        &self.cells
    }

    /// Kinds in canonical order: built-ins first, then styles by name.
    pub fn kinds(&self) -> Vec<KindId> {
        let mut kinds: Vec<KindId> = self.cells.iter().map(|c| c.kind.clone()).collect();
        kinds.dedup();
        kinds
    }

    pub fn cells_for(&self, kind: &KindId) -> Vec<DeeCell> {
        self.cells.iter().filter(|c| &c.kind == kind).cloned().collect()
    }
}

fn sorted_by_severity(cells: &[DeeCell]) -> Vec<&DeeCell> {
    let mut v: Vec<&DeeCell> = cells.iter().collect();
    v.sort_by_key(|c| c.severity);
    v
}

/// `100 * sum(DEE) / sum(DEE_baseline)` over aligned severities.
pub fn corruption_error(model_cells: &[DeeCell], baseline_cells: &[DeeCell]) -> Result<f64> {
    let m = sorted_by_severity(model_cells);
    let b = sorted_by_severity(baseline_cells);
    if m.is_empty() || m.len() != b.len() {
        return Err(Error::MisalignedCells(format!(
            "{} model cells against {} baseline cells",
            m.len(),
            b.len()
        )));
    }
    let kind = &m[0].kind;
    for (x, y) in m.iter().zip(&b) {
        if &x.kind != kind || &y.kind != kind || x.severity != y.severity {
            return Err(Error::MisalignedCells(format!(
                "{}@{} paired with {}@{}",
                x.kind, x.severity, y.kind, y.severity
            )));
        }
    }
    let num: f64 = m.iter().map(|c| c.dee).sum();
    let den: f64 = b.iter().map(|c| c.dee).sum();
    if !(den > 0.0) {
        return Err(Error::DegenerateBaseline(format!("baseline DEE sum for {kind} is {den}")));
    }
    Ok(100.0 * num / den)
}

/// `100 * sum(1 - DEE) / (L * (1 - clean_dee))`.
pub fn resilience_rate(model_cells: &[DeeCell], clean_dee: f64) -> Result<f64> {
    if !(clean_dee < 1.0) {
        return Err(Error::DegenerateClean(clean_dee));
    }
    if model_cells.is_empty() {
        return Err(Error::MisalignedCells("resilience rate needs at least one level".into()));
    }
    let retained: f64 = sorted_by_severity(model_cells).iter().map(|c| 1.0 - c.dee).sum();
    Ok(100.0 * retained / (model_cells.len() as f64 * (1.0 - clean_dee)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub kind: KindId,
    pub category: Option<Category>,
    pub ce: f64,
    pub rr: f64,
    /// Mean DEE over severities.
    pub mean_dee: f64,
    /// DEE per severity, level 1 first.
    pub curve: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySummary {
    pub category: Category,
    pub mce: f64,
    pub mrr: f64,
    pub mdee: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub model_id: String,
    pub baseline_id: String,
    pub levels: u8,
    pub clean_dee: f64,
    pub mce: f64,
    pub mrr: f64,
    pub mdee: f64,
    pub kinds: Vec<KindSummary>,
    pub categories: Vec<CategorySummary>,
}

impl RobustnessReport {
    pub fn kind(&self, kind: &KindId) -> Option<&KindSummary> {
        self.kinds.iter().find(|k| &k.kind == kind)
    }

    pub fn category(&self, category: Category) -> Option<&CategorySummary> {
        self.categories.iter().find(|c| c.category == category)
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    s / n as f64
}

/// Full report for one model against `baseline`.
///
/// The model must cover exactly the baseline's (kind, severity) grid.
pub fn summarize(model_cells: &[DeeCell], baseline: &BaselineTable, clean_dee: f64) -> Result<RobustnessReport> {
    if !(clean_dee < 1.0) {
        return Err(Error::DegenerateClean(clean_dee));
    }
    let model_id = model_cells
        .first()
        .map(|c| c.model_id.clone())
        .ok_or_else(|| Error::MissingCells(missing_all(baseline)))?;

    let mut by_kind: BTreeMap<KindId, Vec<DeeCell>> = BTreeMap::new();
    for c in model_cells {
        if c.model_id != model_id {
            return Err(Error::MisalignedCells(format!(
                "cells of {} and {} mixed in one summary",
                model_id, c.model_id
            )));
        }
        by_kind.entry(c.kind.clone()).or_default().push(c.clone());
    }

    let mut missing = Vec::new();
    for b in baseline.cells() {
        let present = by_kind
            .get(&b.kind)
            .is_some_and(|v| v.iter().any(|c| c.severity == b.severity));
        if !present {
            missing.push((b.kind.to_string(), b.severity));
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingCells(missing));
    }
    for (kind, cells) in &by_kind {
        let expected = baseline.cells_for(kind).len();
        if expected == 0 || cells.len() != expected {
            return Err(Error::MisalignedCells(format!(
                "{kind} has {} cells, baseline expects {expected}",
                cells.len()
            )));
        }
    }

    let mut kinds = Vec::new();
    for kind in baseline.kinds() {
        let cells = &by_kind[&kind];
        let curve: Vec<f64> = sorted_by_severity(cells).iter().map(|c| c.dee).collect();
        kinds.push(KindSummary {
            category: kind.category(),
            ce: corruption_error(cells, &baseline.cells_for(&kind))?,
            rr: resilience_rate(cells, clean_dee)?,
            mean_dee: mean(curve.iter().copied()),
            curve,
            kind,
        });
    }

    let categories = Category::ALL
        .into_iter()
        .filter_map(|cat| {
            let members: Vec<&KindSummary> = kinds.iter().filter(|k| k.category == Some(cat)).collect();
            (!members.is_empty()).then(|| CategorySummary {
                category: cat,
                mce: mean(members.iter().map(|k| k.ce)),
                mrr: mean(members.iter().map(|k| k.rr)),
                mdee: mean(members.iter().map(|k| k.mean_dee)),
            })
        })
        .collect();

    Ok(RobustnessReport {
        model_id,
        baseline_id: baseline.model_id().to_string(),
        levels: baseline.levels(),
        clean_dee,
        mce: mean(kinds.iter().map(|k| k.ce)),
        mrr: mean(kinds.iter().map(|k| k.rr)),
        mdee: mean(kinds.iter().map(|k| k.mean_dee)),
        kinds,
        categories,
    })
}

fn missing_all(baseline: &BaselineTable) -> Vec<(String, u8)> {
    baseline.cells().iter().map(|c| (c.kind.to_string(), c.severity)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_baseline() -> BaselineTable {
        let cells = CorruptionKind::ALL
            .into_iter()
            .enumerate()
            .flat_map(|(i, k)| (1..=5u8).map(move |s| DeeCell::new("base", k, s, 0.1 + 0.01 * i as f64 + 0.02 * f64::from(s))))
            .collect();
        BaselineTable::new("base", 0.1, cells).unwrap()
    }

    #[test]
    fn ce_spot_values() {
        let m = replicate("MonoViT", CorruptionKind::Dark, 5, 0.243);
        let b = replicate("MonoDepth2", CorruptionKind::Dark, 5, 0.280);
        assert!((corruption_error(&m, &b).unwrap() - 86.8).abs() < 0.05);
        let doubled: Vec<DeeCell> = b.iter().map(|c| DeeCell { dee: 2.0 * c.dee, ..c.clone() }).collect();
        assert!((corruption_error(&doubled, &b).unwrap() - 200.0).abs() < 1e-9);
    }

    #[test]
    fn rr_spot_values() {
        let m = replicate("MonoDepth2", CorruptionKind::Brightness, 5, 0.130);
        assert!((resilience_rate(&m, 0.119).unwrap() - 98.8).abs() < 0.05);
        let same = replicate("m", CorruptionKind::Fog, 5, 0.2);
        assert!((resilience_rate(&same, 0.2).unwrap() - 100.0).abs() < 1e-9);
        let dead = replicate("m", CorruptionKind::Fog, 5, 1.0);
        assert_eq!(resilience_rate(&dead, 0.2).unwrap(), 0.0);
        assert!(matches!(resilience_rate(&same, 1.0), Err(Error::DegenerateClean(_))));
    }

    #[test]
    fn misaligned_and_degenerate_inputs() {
        let a = replicate("m", CorruptionKind::Fog, 5, 0.2);
        let b = replicate("b", CorruptionKind::Snow, 5, 0.2);
        assert!(matches!(corruption_error(&a, &b), Err(Error::MisalignedCells(_))));
        let short = replicate("b", CorruptionKind::Fog, 4, 0.2);
        assert!(matches!(corruption_error(&a, &short), Err(Error::MisalignedCells(_))));
        let zero = replicate("b", CorruptionKind::Fog, 5, 0.0);
        assert!(matches!(corruption_error(&a, &zero), Err(Error::DegenerateBaseline(_))));
    }

    #[test]
    fn baseline_against_itself_is_one_hundred() {
        let base = toy_baseline();
        let r = summarize(base.cells(), &base, base.clean_dee()).unwrap();
        assert!((r.mce - 100.0).abs() < 1e-9);
        for c in &r.categories {
            assert!((c.mce - 100.0).abs() < 1e-9);
        }
        assert_eq!(r.categories.len(), 3);
        assert_eq!(r.kinds.len(), 18);
    }

    #[test]
    fn missing_cells_are_listed() {
        let base = toy_baseline();
        let partial: Vec<DeeCell> = base
            .cells()
            .iter()
            .filter(|c| !(c.kind == KindId::Builtin(CorruptionKind::Fog) && c.severity == 3))
            .cloned()
            .collect();
        match summarize(&partial, &base, 0.1) {
            Err(Error::MissingCells(m)) => assert_eq!(m, vec![("fog".to_string(), 3)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn style_kinds_round_trip() {
        let k: KindId = "style:starry_night".parse().unwrap();
        assert_eq!(k.to_string(), "style:starry_night");
        assert_eq!(k.category(), None);
        assert!("style:".parse::<KindId>().is_err());
        let json = serde_json::to_string(&KindId::Builtin(CorruptionKind::ZoomBlur)).unwrap();
        assert_eq!(json, "\"zoom_blur\"");
    }

    #[test]
    fn baseline_requires_rectangular_grid() {
        let mut cells = replicate("b", CorruptionKind::Fog, 5, 0.2);
        cells.extend(replicate("b", CorruptionKind::Snow, 4, 0.2));
        assert!(BaselineTable::new("b", 0.1, cells).is_err());
    }
}
