//! Clean set in, corrupted set plus manifest out.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::io::{content_hash, read_rgb, write_png_rgb};
use super::manifest::{output_path_for, DatasetManifest, ManifestEntry, MANIFEST_FILE, MANIFEST_SCHEMA_VERSION};
use crate::corruptions::{apply_corruption_with, CorruptionContext, CorruptionKind, CorruptionSpec, FrostSource, Profile};
use crate::error::{Error, Result};
use crate::imagecore::{derive_seed, Fnv1a};

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.iter().any(|x| x.eq_ignore_ascii_case(e)))
}

/// Image files under `root`, as sorted `/`-separated relative paths.
pub fn list_images(root: &Path) -> Result<Vec<String>> {
    if !root.is_dir() {
        return Err(Error::InvalidRequest(format!("{} is not a directory", root.display())));
    }
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(root).follow_links(true) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if entry.file_type().is_file() && is_image(entry.path()) {
            let rel = entry.path().strip_prefix(root).expect("walk stays under its root");
            let parts: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
            out.push(parts.join("/"));
        }
    }
    out.sort();
    Ok(out)
}

/// Loads every image in `dir` as a frost texture.
pub fn load_frost_assets(dir: &Path) -> Result<FrostSource> {
    let names = list_images(dir)?;
    let mut hash = Fnv1a::new();
    let mut images = Vec::with_capacity(names.len());
    for name in &names {
        let img = read_rgb(&dir.join(name))?;
        hash.update(name.as_bytes()).update(&content_hash(&img).to_le_bytes());
        images.push(img);
    }
    FrostSource::from_images(images, hash.finish())
}

/// Everything `generate_dataset` needs.
#[derive(Debug, Clone)]
pub struct GenerateRequest {
    pub clean_dir: PathBuf,
    pub out_dir: PathBuf,
    pub base_dataset: String,
    pub profile: Profile,
    pub kinds: Vec<CorruptionKind>,
    /// `None` means every level of the profile.
    pub severities: Option<Vec<u8>>,
    pub seed_root: u64,
    pub jobs: usize,
    /// Plan the manifest without decoding or writing any image.
    pub dry_run: bool,
    pub context: CorruptionContext,
}

impl GenerateRequest {
    pub fn new(clean_dir: impl Into<PathBuf>, out_dir: impl Into<PathBuf>, profile: Profile, seed_root: u64) -> Self {
        let clean_dir = clean_dir.into();
        let base_dataset = clean_dir
            .file_name()
            .map_or_else(|| "clean".to_string(), |n| n.to_string_lossy().into_owned());
        GenerateRequest {
            clean_dir,
            out_dir: out_dir.into(),
            base_dataset,
            profile,
            kinds: profile.default_kinds(),
            severities: None,
            seed_root,
            jobs: 1,
            dry_run: false,
            context: CorruptionContext::default(),
        }
    }

    fn levels(&self) -> Result<Vec<u8>> {
        let mut levels = self.severities.clone().unwrap_or_else(|| (1..=self.profile.levels()).collect());
        levels.sort_unstable();
        levels.dedup();
        if levels.is_empty() {
            return Err(Error::InvalidRequest("empty severity list".into()));
        }
        for &s in &levels {
            self.profile.check_severity(s)?;
        }
        Ok(levels)
    }

    fn checked_kinds(&self) -> Result<Vec<CorruptionKind>> {
        if self.kinds.is_empty() {
            return Err(Error::InvalidRequest("empty corruption kind list".into()));
        }
        let allowed = self.profile.default_kinds();
        let mut kinds = self.kinds.clone();
        kinds.sort_by_key(|k| k.id());
        kinds.dedup();
        if let Some(k) = kinds.iter().find(|k| !allowed.contains(k)) {
            return Err(Error::Profile(format!("{k} is not part of profile {}", self.profile)));
        }
        Ok(kinds)
    }
}

/// A manifest plus the files that could not be produced.
#[derive(Debug)]
pub struct GenerateOutcome {
    pub manifest: DatasetManifest,
    /// Existing outputs whose hash matched and were left untouched.
    pub reused: usize,
    pub failures: Vec<(PathBuf, String)>,
}

impl GenerateOutcome {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidRequest(format!("cannot start {jobs} workers: {e}")))
}

struct ImageResult {
    entries: Vec<ManifestEntry>,
    reused: usize,
    failures: Vec<(PathBuf, String)>,
}

fn process_image(req: &GenerateRequest, rel: &str, kinds: &[CorruptionKind], levels: &[u8]) -> ImageResult {
    let mut res = ImageResult {
        entries: Vec::new(),
        reused: 0,
        failures: Vec::new(),
    };
    let src = req.clean_dir.join(rel);
    let clean = if req.dry_run {
        None
    } else {
        match read_rgb(&src) {
            Ok(img) => Some(img),
            Err(e) => {
                res.failures.push((src, e.to_string()));
                return res;
            }
        }
    };
    for &kind in kinds {
        for &severity in levels {
            let derived_seed = derive_seed(req.seed_root, rel, kind, severity);
            let output_path = output_path_for(rel, kind, severity);
            let mut entry = ManifestEntry {
                relative_path: rel.to_string(),
                kind,
                severity,
                derived_seed,
                output_path,
                content_hash: None,
            };
            if let Some(img) = &clean {
                let dest = req.out_dir.join(&entry.output_path);
                match emit(img, &dest, CorruptionSpec::new(kind, severity, derived_seed), &req.context) {
                    Ok((hash, reused)) => {
                        entry.content_hash = Some(hash);
                        res.reused += usize::from(reused);
                    }
                    Err(e) => {
                        res.failures.push((dest, e.to_string()));
                        continue;
                    }
                }
            }
            res.entries.push(entry);
        }
    }
    res
}

/// Renders one entry. An existing file is kept when its pixels hash to the
/// freshly rendered value and reported as a failure otherwise.
fn emit(
    clean: &crate::imagecore::ImageBuffer,
    dest: &Path,
    spec: CorruptionSpec,
    ctx: &CorruptionContext,
) -> Result<(u64, bool)> {
    let out = apply_corruption_with(clean, &spec, ctx)?;
    let hash = content_hash(&out);
    if dest.exists() {
        let existing = content_hash(&read_rgb(dest)?);
        if existing != hash {
            return Err(Error::Verification(format!(
                "existing file hashes to {existing:#018x}, expected {hash:#018x}"
            )));
        }
        return Ok((hash, true));
    }
    write_png_rgb(dest, &out)?;
    Ok((hash, false))
}

/// Generates every (image, kind, severity) rendering and writes
/// `out_dir/manifest.json` (not for dry runs).
///
/// Per-file failures do not stop the run; they are returned in the outcome
/// and their entries are left out of the manifest.
pub fn generate_dataset(req: &GenerateRequest) -> Result<GenerateOutcome> {
    let kinds = req.checked_kinds()?;
    let levels = req.levels()?;
    let images = list_images(&req.clean_dir)?;
    if images.is_empty() {
        return Err(Error::InvalidRequest(format!("no images under {}", req.clean_dir.display())));
    }
    log::info!(
        "{} images x {} kinds x {} levels with {} worker(s)",
        images.len(),
        kinds.len(),
        levels.len(),
        req.jobs.max(1)
    );

    let results: Vec<ImageResult> = thread_pool(req.jobs)?.install(|| {
        images
            .par_iter()
            .map(|rel| process_image(req, rel, &kinds, &levels))
            .collect()
    });

    let mut entries = Vec::with_capacity(images.len() * kinds.len() * levels.len());
    let mut failures = Vec::new();
    let mut reused = 0;
    for r in results {
        entries.extend(r.entries);
        failures.extend(r.failures);
        reused += r.reused;
    }
    entries.sort_by(|a, b| a.key().cmp(&b.key()));
    failures.sort();

    let manifest = DatasetManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        base_dataset: req.base_dataset.clone(),
        clean_root: req.clean_dir.to_string_lossy().into_owned(),
        profile: req.profile,
        seed_root: req.seed_root,
        kinds,
        severities: levels,
        image_count: images.len(),
        severity_table_hash: req.context.table.content_hash(),
        frost_asset_hash: req.context.frost.content_hash(),
        entries,
    };
    if !req.dry_run {
        manifest.save(&req.out_dir.join(MANIFEST_FILE))?;
    }
    for (path, msg) in &failures {
        log::warn!("{}: {msg}", path.display());
    }
    Ok(GenerateOutcome {
        manifest,
        reused,
        failures,
    })
}

/// Result of re-rendering a sample of manifest entries.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub checked: Vec<String>,
    /// `(output_path, reason)` for every entry that did not reproduce.
    pub mismatches: Vec<(String, String)>,
}

/// Picks `n` entry indices without replacement, seeded by the manifest hash.
pub fn sample_entries(manifest: &DatasetManifest, n: usize) -> Result<Vec<usize>> {
    let mut rng = crate::imagecore::DeterministicRng::new(manifest.content_hash()?);
    let mut idx: Vec<usize> = (0..manifest.entries.len()).collect();
    let n = n.min(idx.len());
    for i in 0..n {
        let j = i + rng.below(idx.len() - i);
        idx.swap(i, j);
    }
    idx.truncate(n);
    idx.sort_unstable();
    Ok(idx)
}

/// Re-renders a deterministic sample and compares it against the manifest
/// hashes and the files under `out_dir`.
pub fn verify_manifest(
    manifest: &DatasetManifest,
    clean_dir: &Path,
    out_dir: &Path,
    sample: usize,
    context: &CorruptionContext,
    jobs: usize,
) -> Result<VerifyOutcome> {
    if context.table.content_hash() != manifest.severity_table_hash {
        return Err(Error::Verification(format!(
            "severity table hash {:#018x} differs from the manifest's {:#018x}",
            context.table.content_hash(),
            manifest.severity_table_hash
        )));
    }
    if context.frost.content_hash() != manifest.frost_asset_hash {
        return Err(Error::Verification("frost assets differ from the ones used for generation".into()));
    }
    let picks = sample_entries(manifest, sample)?;
    let checks: Vec<(String, Option<String>)> = thread_pool(jobs)?.install(|| {
        picks
            .par_iter()
            .map(|&i| {
                let e = &manifest.entries[i];
                (e.output_path.clone(), check_entry(e, manifest.seed_root, clean_dir, out_dir, context).err())
            })
            .collect()
    });
    let mut out = VerifyOutcome {
        checked: Vec::new(),
        mismatches: Vec::new(),
    };
    for (path, err) in checks {
        if let Some(msg) = err {
            out.mismatches.push((path.clone(), msg));
        }
        out.checked.push(path);
    }
    Ok(out)
}

fn check_entry(
    e: &ManifestEntry,
    seed_root: u64,
    clean_dir: &Path,
    out_dir: &Path,
    context: &CorruptionContext,
) -> std::result::Result<(), String> {
    let expected = e.content_hash.ok_or("entry has no content hash (dry run manifest)")?;
    let seed = derive_seed(seed_root, &e.relative_path, e.kind, e.severity);
    if seed != e.derived_seed {
        return Err(format!("derived seed {seed:#018x} differs from recorded {:#018x}", e.derived_seed));
    }
    let clean = read_rgb(&clean_dir.join(&e.relative_path)).map_err(|err| err.to_string())?;
    let fresh = apply_corruption_with(&clean, &CorruptionSpec::new(e.kind, e.severity, seed), context)
        .map_err(|err| err.to_string())?;
    let fresh_hash = content_hash(&fresh);
    if fresh_hash != expected {
        return Err(format!("regenerated hash {fresh_hash:#018x}, manifest has {expected:#018x}"));
    }
    let on_disk = content_hash(&read_rgb(&out_dir.join(&e.output_path)).map_err(|err| err.to_string())?);
    if on_disk != expected {
        return Err(format!("file hash {on_disk:#018x}, manifest has {expected:#018x}"));
    }
    Ok(())
}
