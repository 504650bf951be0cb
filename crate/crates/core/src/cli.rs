//! The `mderobust` command line.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 partial failure
//! (some files failed to generate, or a verification sample mismatched).
//! Logs go to stderr; data written to `-` goes to stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corruptions::{CorruptionKind, Profile};
use crate::depthmetrics::EvalProtocol;
use crate::error::{Error, Result};
use crate::harness::{
    build_report, evaluate, generate_dataset, list_images, pixel_histogram, read_model_cells, verify_manifest,
    write_long_table, Config, DatasetManifest, DepthFormat, EvalTargets, GenerateRequest, GroundTruth,
    PredictionSet, ReportDocument, CONFIG_ENV, MANIFEST_FILE,
};
use crate::robustness::KindId;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "mderobust", version, about = "Corrupted-benchmark generation and robustness scoring for depth models")]
pub struct Invocation {
    /// Config file; defaults to $MDEROBUST_CONFIG when set.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// More log output on stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Only errors on stderr.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Render every corruption of a clean image set.
    Corrupt(CorruptArgs),
    /// Score depth predictions against ground truth.
    Evaluate(EvaluateArgs),
    /// Turn DEE cells into CE / RR tables.
    Report(ReportArgs),
    /// Per-channel pixel histogram of an image directory.
    Histogram(HistogramArgs),
    /// Re-render a sample of a manifest and compare hashes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct CorruptArgs {
    #[arg(long = "in", value_name = "DIR")]
    pub input: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long)]
    pub profile: Option<Profile>,
    /// Comma-separated kinds; all kinds of the profile by default.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Vec<CorruptionKind>,
    /// Comma-separated levels; all levels of the profile by default.
    #[arg(long, value_delimiter = ',')]
    pub severities: Vec<u8>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Dataset id recorded in the manifest; the input directory name by default.
    #[arg(long)]
    pub name: Option<String>,
    /// Count and plan entries without decoding or writing images.
    #[arg(long)]
    pub dry_run: bool,
    #[arg(long, value_name = "FILE")]
    pub severity_table: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub frost_assets: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DepthCodec {
    Png16,
    Pfm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolPreset {
    Kitti,
    Nyu,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct EvaluateArgs {
    /// Prediction root (`<kind>/<severity>/...` and `clean/...`).
    #[arg(long, value_name = "DIR")]
    pub pred: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub gt: PathBuf,
    /// Evaluate every cell of this manifest; without it only the clean set is scored.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value = "model")]
    pub model: String,
    #[arg(long)]
    pub profile: Option<Profile>,
    #[arg(long, value_enum)]
    pub pred_format: Option<DepthCodec>,
    #[arg(long)]
    pub pred_divisor: Option<String>,
    #[arg(long)]
    pub gt_divisor: Option<String>,
    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolPreset>,
    /// Externally stylized set scored as kind `style:<NAME>`, severity 1.
    #[arg(long = "style", value_name = "NAME")]
    pub styles: Vec<String>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Long-format DEE cells (`-` for stdout).
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Full per-cell scores as JSON.
    #[arg(long, value_name = "FILE")]
    pub scores: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct ReportArgs {
    /// Long (`model,kind,severity,dee`) or wide (`model,modality,clean_dee,...`) CSV.
    #[arg(long, value_name = "FILE")]
    pub cells: PathBuf,
    #[arg(long)]
    pub model: Option<String>,
    /// Baseline in long form; the bundled one for the profile by default.
    #[arg(long, value_name = "FILE")]
    pub baseline: Option<PathBuf>,
    #[arg(long)]
    pub profile: Option<Profile>,
    /// Manifest whose hash is recorded as provenance.
    #[arg(long, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
    /// Output directory, or `-` for the JSON document on stdout.
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct HistogramArgs {
    #[arg(long = "in", value_name = "DIR")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 256)]
    pub bins: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub sample: usize,
    /// Clean root; the one recorded in the manifest by default.
    #[arg(long, value_name = "DIR")]
    pub clean: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub severity_table: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub frost_assets: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn parse_divisor(s: &Option<String>) -> Result<Option<f64>> {
    s.as_deref()
        .map(|v| match v.parse::<f64>() {
            Ok(d) if d > 0.0 && d.is_finite() => Ok(d),
            _ => Err(Error::InvalidRequest(format!("divisor '{v}' must be a positive number"))),
        })
        .transpose()
}

impl Invocation {
    /// Parses `argv` (program name first) and applies checks that need no I/O.
    pub fn parse_from<I, T>(argv: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let inv = Invocation::try_parse_from(argv)?;
        inv.validate().map_err(|e| {
            let mut cmd = <Invocation as clap::CommandFactory>::command();
            cmd.error(clap::error::ErrorKind::ArgumentConflict, e.to_string())
        })?;
        Ok(inv)
    }

    fn validate(&self) -> Result<()> {
        match &self.command {
            Command::Corrupt(a) => {
                if let Some(p) = a.profile {
                    let allowed = p.default_kinds();
                    if let Some(k) = a.kinds.iter().find(|k| !allowed.contains(k)) {
                        return Err(Error::Profile(format!("--kinds {k} is not part of profile {p}")));
                    }
                    for &s in &a.severities {
                        p.check_severity(s)?;
                    }
                }
                if a.jobs == Some(0) {
                    return Err(Error::InvalidRequest("--jobs must be at least 1".into()));
                }
            }
            Command::Evaluate(a) => {
                parse_divisor(&a.pred_divisor)?;
                parse_divisor(&a.gt_divisor)?;
                if a.pred_format == Some(DepthCodec::Pfm) && a.pred_divisor.is_some() {
                    return Err(Error::InvalidRequest("--pred-divisor applies to png16 predictions only".into()));
                }
                for s in &a.styles {
                    format!("style:{s}").parse::<KindId>()?;
                }
            }
            Command::Histogram(a) if a.bins == 0 => {
                return Err(Error::InvalidRequest("--bins must be at least 1".into()));
            }
            _ => {}
        }
        Ok(())
    }

    fn log_level(&self) -> log::LevelFilter {
        match (self.quiet, self.verbose) {
            (true, _) => log::LevelFilter::Error,
            (_, 0) => log::LevelFilter::Info,
            (_, 1) => log::LevelFilter::Debug,
            _ => log::LevelFilter::Trace,
        }
    }
}

/// Parses and executes; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match Invocation::parse_from(argv) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
        }
    };
    let _ = env_logger::Builder::new()
        .filter_level(inv.log_level())
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
    let config_path = inv.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match execute(&inv, config_path.as_deref()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::PartialFailure(files) = &e {
                for (p, m) in files {
                    eprintln!("  {}: {m}", p.display());
                }
                EXIT_PARTIAL
            } else {
                EXIT_INVALID
            }
        }
    }
}

fn resolve_config(path: Option<&Path>, profile: Option<Profile>) -> Result<Config> {
    match path {
        Some(p) => {
            let cfg = Config::load(p)?;
            match profile {
                Some(pr) if pr != cfg.profile => Err(Error::Config(format!(
                    "--profile {pr} conflicts with profile {} in {}",
                    cfg.profile,
                    p.display()
                ))),
                _ => Ok(cfg),
            }
        }
        None => Ok(Config::for_profile(profile.unwrap_or(Profile::Outdoor5))),
    }
}

fn write_output(target: &str, body: &str) -> Result<()> {
    if target == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(body.as_bytes()).map_err(|e| Error::io("<stdout>", e))?;
        out.flush().map_err(|e| Error::io("<stdout>", e))
    } else {
        let path = Path::new(target);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(path, body).map_err(|e| Error::io(path, e))
    }
}

/// Runs a parsed invocation.
pub fn execute(inv: &Invocation, config_path: Option<&Path>) -> Result<i32> {
    match &inv.command {
        Command::Corrupt(a) => corrupt(a, config_path),
        Command::Evaluate(a) => evaluate_cmd(a, config_path),
        Command::Report(a) => report(a, config_path),
        Command::Histogram(a) => {
            let h = pixel_histogram(&a.input, a.bins)?;
            log::info!("{} images, {} samples", h.images(), h.total());
            write_output(&a.out, &h.to_csv()?)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => verify(a, config_path),
    }
}

fn corrupt(a: &CorruptArgs, config_path: Option<&Path>) -> Result<i32> {
    let mut cfg = resolve_config(config_path, a.profile)?;
    if a.severity_table.is_some() {
        cfg.severity_table = a.severity_table.clone();
    }
    if a.frost_assets.is_some() {
        cfg.frost_assets = a.frost_assets.clone();
    }
    let mut req = GenerateRequest::new(&a.input, &a.out, cfg.profile, a.seed.unwrap_or(cfg.seed_root));
    if !a.kinds.is_empty() {
        req.kinds = a.kinds.clone();
    }
    if !a.severities.is_empty() {
        req.severities = Some(a.severities.clone());
    }
    if let Some(n) = &a.name {
        req.base_dataset = n.clone();
    }
    req.jobs = a.jobs.unwrap_or(cfg.jobs);
    req.dry_run = a.dry_run;
    req.context = cfg.corruption_context()?;
    let outcome = generate_dataset(&req)?;
    let m = &outcome.manifest;
    if a.dry_run {
        println!(
            "{} entries ({} images x {} kinds x {} levels)",
            m.entries.len(),
            m.image_count,
            m.kinds.len(),
            m.severities.len()
        );
        return Ok(EXIT_OK);
    }
    log::info!(
        "{} entries, {} reused, manifest at {}",
        m.entries.len(),
        outcome.reused,
        a.out.join(MANIFEST_FILE).display()
    );
    if outcome.is_complete() {
        Ok(EXIT_OK)
    } else {
        Err(Error::PartialFailure(outcome.failures))
    }
}

fn evaluate_cmd(a: &EvaluateArgs, config_path: Option<&Path>) -> Result<i32> {
    let cfg = resolve_config(config_path, a.profile)?;
    let pred_format = match (a.pred_format, parse_divisor(&a.pred_divisor)?) {
        (Some(DepthCodec::Pfm), _) => DepthFormat::Pfm,
        (Some(DepthCodec::Png16), Some(divisor)) | (None, Some(divisor)) => DepthFormat::Png16 { divisor },
        (Some(DepthCodec::Png16), None) => match cfg.prediction {
            f @ DepthFormat::Png16 { .. } => f,
            DepthFormat::Pfm => cfg.ground_truth,
        },
        (None, None) => cfg.prediction,
    };
    let gt_format = match parse_divisor(&a.gt_divisor)? {
        Some(divisor) => DepthFormat::Png16 { divisor },
        None => cfg.ground_truth,
    };
    let proto = match a.protocol {
        Some(ProtocolPreset::Kitti) => EvalProtocol::kitti(),
        Some(ProtocolPreset::Nyu) => EvalProtocol::nyu(),
        Some(ProtocolPreset::None) => EvalProtocol::unconstrained(),
        None => cfg.protocol,
    };
    let (mut targets, manifest_hash) = match &a.manifest {
        Some(p) => {
            let m = DatasetManifest::load(p)?;
            (EvalTargets::from_manifest(&m), Some(m.content_hash()?))
        }
        None => (EvalTargets::clean_only(list_images(&a.gt)?), None),
    };
    for s in &a.styles {
        targets.cells.push((format!("style:{s}").parse()?, 1));
    }
    let pred = PredictionSet::new(a.model.clone(), &a.pred, pred_format);
    let gt = GroundTruth {
        root: a.gt.clone(),
        format: gt_format,
    };
    let ev = evaluate(&pred, &gt, &targets, &proto, a.jobs.unwrap_or(cfg.jobs))?;
    if let Some(h) = manifest_hash {
        log::info!("evaluated manifest {h:#018x}");
    }
    let clean: std::collections::BTreeMap<String, f64> = ev.clean_dee().map(|d| (ev.model_id.clone(), d)).into_iter().collect();
    let mut buf = Vec::new();
    write_long_table(&mut buf, &clean, &ev.dee_cells())?;
    write_output(&a.out, &String::from_utf8(buf).expect("CSV is UTF-8"))?;
    if let Some(path) = &a.scores {
        let mut json = serde_json::to_string_pretty(&ev)?;
        json.push('\n');
        write_output(&path.to_string_lossy(), &json)?;
    }
    if let Some(c) = ev.clean {
        log::info!("clean abs_rel {:.4} d1 {:.4} dee {:.4}", c.abs_rel, c.d1, c.dee);
    }
    Ok(EXIT_OK)
}

fn report(a: &ReportArgs, config_path: Option<&Path>) -> Result<i32> {
    let mut cfg = resolve_config(config_path, a.profile)?;
    if a.baseline.is_some() {
        cfg.baseline = a.baseline.clone();
    }
    let baseline = cfg.baseline()?;
    let (cells, clean) = read_model_cells(&a.cells, a.model.as_deref(), cfg.profile.levels())?;
    let mut doc = build_report(&cells, clean, &baseline, Some(cfg.profile))?;
    if let Some(p) = &a.manifest {
        doc = doc.with_manifest_hash(DatasetManifest::load(p)?.content_hash()?);
    }
    let summary = summary_text(&doc);
    if a.out == "-" {
        write_output("-", &doc.to_json()?)?;
        eprint!("{summary}");
    } else {
        let dir = PathBuf::from(&a.out);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        for f in doc.write_all(&dir)? {
            log::info!("wrote {}", f.display());
        }
        print!("{summary}");
    }
    Ok(EXIT_OK)
}

/// The rounded headline numbers, one per line.
pub fn summary_text(doc: &ReportDocument) -> String {
    let p = &doc.presentation;
    let mut s = format!(
        "model {} vs baseline {}\nmCE {:.1}\nmRR {:.1}\nmDEE {:.3}\nclean DEE {:.3}\n",
        doc.report.model_id, doc.provenance.baseline_id, p.mce, p.mrr, p.mdee, p.clean_dee
    );
    for c in &p.categories {
        s.push_str(&format!("{} mCE {:.1} mRR {:.1}\n", c.category, c.mce, c.mrr));
    }
    s
}

fn verify(a: &VerifyArgs, config_path: Option<&Path>) -> Result<i32> {
    let manifest = DatasetManifest::load(&a.manifest)?;
    let mut cfg = resolve_config(config_path, Some(manifest.profile))?;
    if a.severity_table.is_some() {
        cfg.severity_table = a.severity_table.clone();
    }
    if a.frost_assets.is_some() {
        cfg.frost_assets = a.frost_assets.clone();
    }
    let out_dir = a.manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let clean = a.clean.clone().unwrap_or_else(|| PathBuf::from(&manifest.clean_root));
    let outcome = verify_manifest(
        &manifest,
        &clean,
        &out_dir,
        a.sample,
        &cfg.corruption_context()?,
        a.jobs.unwrap_or(cfg.jobs),
    )?;
    println!(
        "checked {} of {} entries, {} mismatched",
        outcome.checked.len(),
        manifest.entries.len(),
        outcome.mismatches.len()
    );
    if outcome.mismatches.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(Error::PartialFailure(
            outcome.mismatches.into_iter().map(|(p, m)| (PathBuf::from(p), m)).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_argv_gives_identical_plans() {
        let argv = ["mderobust", "corrupt", "--in", "c", "--out", "o", "--kinds", "fog,snow", "--seed", "17"];
        let a = Invocation::parse_from(argv).unwrap();
        assert_eq!(a, Invocation::parse_from(argv).unwrap());
        let Command::Corrupt(c) = a.command else { panic!() };
        assert_eq!(c.kinds, vec![CorruptionKind::Fog, CorruptionKind::Snow]);
        assert_eq!(c.seed, Some(17));
    }

    #[test]
    fn conflicts_are_rejected_before_io() {
        for argv in [
            vec!["mderobust", "corrupt", "--in", "c", "--out", "o", "--profile", "indoor-4", "--kinds", "fog"],
            vec!["mderobust", "corrupt", "--in", "c", "--out", "o", "--profile", "indoor-4", "--severities", "5"],
            vec!["mderobust", "evaluate", "--pred", "p", "--gt", "g", "--pred-format", "pfm", "--pred-divisor", "256"],
            vec!["mderobust", "histogram", "--in", "x", "--bins", "0"],
            vec!["mderobust", "corrupt", "--in", "c"],
            vec!["mderobust", "explode"],
            vec!["mderobust", "corrupt", "--in", "c", "--out", "o", "--profile", "moon"],
        ] {
            assert!(Invocation::parse_from(&argv).is_err(), "{argv:?}");
        }
    }
}
