//! Dataset I/O and orchestration.
//!
//! Generated sets are laid out as `out/<kind>/<severity>/<relative_path>`
//! next to a `manifest.json`. Content hashes are 64-bit FNV-1a over the
//! 8-bit RGB samples: fast and good enough to catch drift, not
//! cryptographic.

mod config;
mod evaluate;
mod generate;
mod histogram;
pub mod io;
mod manifest;
mod report;
mod tables;

pub use config::{Config, CONFIG_ENV};
pub use evaluate::{evaluate, CellScores, EvalTargets, Evaluation, GroundTruth, PredictionSet};
pub use generate::{
    generate_dataset, list_images, load_frost_assets, sample_entries, verify_manifest, GenerateOutcome,
    GenerateRequest, VerifyOutcome,
};
pub use histogram::{pixel_histogram, Histogram};
pub use io::{content_hash, DepthFormat};
pub use manifest::{output_path_for, DatasetManifest, ManifestEntry, MANIFEST_FILE, MANIFEST_SCHEMA_VERSION};
pub use report::{
    build_report, round_dee, round_percent, PresentedCategory, PresentedKind, Presentation, Provenance,
    ReportDocument, REPORT_SCHEMA_VERSION,
};
pub use tables::{
    load_baseline, read_long_table, read_model_cells, read_wide_table, shipped_baseline, write_long_table,
    LongTable, WideRow, WideTable,
};
