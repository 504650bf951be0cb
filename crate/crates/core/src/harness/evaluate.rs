//! Depth predictions in, per-cell scores out.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::thread_pool;
use super::io::DepthFormat;
use super::manifest::{with_extension, DatasetManifest};
use crate::depthmetrics::{aggregate_set, compute_scores, DepthScores, EvalProtocol};
use crate::error::{Error, Result};
use crate::robustness::{DeeCell, KindId};

/// Where one model's depth maps live and how they are encoded.
///
/// Corrupted predictions sit at `root/<kind>/<severity>/<relative_path>`,
/// clean ones at `root/clean/<relative_path>`, with the extension of `format`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub model_id: String,
    pub root: PathBuf,
    pub format: DepthFormat,
}

impl PredictionSet {
    pub fn new(model_id: impl Into<String>, root: impl Into<PathBuf>, format: DepthFormat) -> Self {
        PredictionSet {
            model_id: model_id.into(),
            root: root.into(),
            format,
        }
    }

    pub fn path_for(&self, cell: Option<&(KindId, u8)>, relative_path: &str) -> PathBuf {
        let file = with_extension(relative_path, self.format.extension());
        match cell {
            Some((kind, severity)) => self.root.join(kind.to_string()).join(severity.to_string()).join(file),
            None => self.root.join("clean").join(file),
        }
    }
}

/// Ground truth at `root/<relative_path>` with the extension of `format`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub root: PathBuf,
    pub format: DepthFormat,
}

impl GroundTruth {
    pub fn path_for(&self, relative_path: &str) -> PathBuf {
        self.root.join(with_extension(relative_path, self.format.extension()))
    }
}

/// Which images and cells to score.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTargets {
    pub images: Vec<String>,
    pub cells: Vec<(KindId, u8)>,
    pub include_clean: bool,
}

impl EvalTargets {
    /// Every cell of a generated dataset plus the clean set.
    pub fn from_manifest(manifest: &DatasetManifest) -> Self {
        EvalTargets {
            images: manifest.images(),
            cells: manifest.cells().into_iter().map(|(k, s)| (KindId::Builtin(k), s)).collect(),
            include_clean: true,
        }
    }

    pub fn clean_only(images: Vec<String>) -> Self {
        EvalTargets {
            images,
            cells: Vec::new(),
            include_clean: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellScores {
    pub kind: KindId,
    pub severity: u8,
    pub images: usize,
    pub scores: DepthScores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub model_id: String,
    pub clean: Option<DepthScores>,
    pub cells: Vec<CellScores>,
}

impl Evaluation {
    pub fn clean_dee(&self) -> Option<f64> {
        self.clean.map(|s| s.dee)
    }

    pub fn dee_cells(&self) -> Vec<DeeCell> {
        self.cells
            .iter()
            .map(|c| DeeCell::new(self.model_id.clone(), c.kind.clone(), c.severity, c.scores.dee))
            .collect()
    }
}

/// Scores every target. All prediction files are checked for existence
/// before any decoding, so an incomplete set yields no partial result.
pub fn evaluate(
    pred: &PredictionSet,
    gt: &GroundTruth,
    targets: &EvalTargets,
    proto: &EvalProtocol,
    jobs: usize,
) -> Result<Evaluation> {
    if targets.images.is_empty() {
        return Err(Error::EmptyEvaluation("no images to evaluate".into()));
    }
    let mut cells: Vec<Option<&(KindId, u8)>> = Vec::new();
    if targets.include_clean {
        cells.push(None);
    }
    cells.extend(targets.cells.iter().map(Some));
    if cells.is_empty() {
        return Err(Error::InvalidRequest("no cells to evaluate".into()));
    }

    for rel in &targets.images {
        let g = gt.path_for(rel);
        if !g.is_file() {
            return Err(Error::MissingPrediction(g));
        }
        for cell in &cells {
            let p = pred.path_for(*cell, rel);
            if !p.is_file() {
                return Err(Error::MissingPrediction(p));
            }
        }
    }

    // per image: one score per cell, in cell order
    let per_image: Vec<Result<Vec<DepthScores>>> = thread_pool(jobs)?.install(|| {
        targets
            .images
            .par_iter()
            .map(|rel| {
                let truth = gt.format.read(&gt.path_for(rel))?;
                cells
                    .iter()
                    .map(|cell| {
                        let path = pred.path_for(*cell, rel);
                        let p = pred.format.read(&path)?;
                        compute_scores(&p, &truth, proto).map_err(|e| with_path(e, &path))
                    })
                    .collect()
            })
            .collect()
    });
    let per_image: Vec<Vec<DepthScores>> = per_image.into_iter().collect::<Result<_>>()?;

    let mut clean = None;
    let mut out = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let column: Vec<DepthScores> = per_image.iter().map(|row| row[ci]).collect();
        let scores = aggregate_set(&column)?;
        match cell {
            None => clean = Some(scores),
            Some((kind, severity)) => out.push(CellScores {
                kind: kind.clone(),
                severity: *severity,
                images: column.len(),
                scores,
            }),
        }
    }
    Ok(Evaluation {
        model_id: pred.model_id.clone(),
        clean,
        cells: out,
    })
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Shape(m) => Error::Shape(format!("{}: {m}", path.display())),
        Error::InvalidDepth(m) => Error::InvalidDepth(format!("{}: {m}", path.display())),
        Error::EmptyEvaluation(m) => Error::EmptyEvaluation(format!("{}: {m}", path.display())),
        other => other,
    }
}
