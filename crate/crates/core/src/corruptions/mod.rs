//! The 18 severity-parameterized corruptions and their dispatcher.
//!
//! ```
//! use mderobust::corruptions::{apply_corruption, CorruptionKind, CorruptionSpec, SeverityTable};
//! use mderobust::imagecore::ImageBuffer;
//!
//! let img = ImageBuffer::filled(32, 16, 0.5);
//! let spec = CorruptionSpec::new(CorruptionKind::GaussianNoise, 2, 42);
//! let out = apply_corruption(&img, &spec, &SeverityTable::default()).unwrap();
//! assert_eq!(out.dims(), img.dims());
//! ```

mod blur;
mod digital;
mod kind;
mod noise;
mod table;
mod tone;
mod weather;

pub use blur::{apply_blur, center_zoom, defocus_blur, glass_blur, motion_blur, zoom_blur};
pub use digital::{apply_digital, color_quant, elastic_transform, jpeg_compress, pixelate};
pub use kind::{Category, CorruptionKind, CorruptionSpec, Family, Profile};
pub use noise::{apply_noise, gaussian_noise, impulse_noise, iso_noise, shot_noise};
pub use table::{schema, Direction, Level, ParamSpec, SeverityTable};
pub use tone::{apply_tone, brightness, contrast, dark};
pub use weather::{
    apply_weather, fog, frost_blend, frost_texture, procedural_frost, snow, snow_layer, FrostSource, SnowParams,
};

use crate::error::{Error, Result};
use crate::imagecore::{DeterministicRng, ImageBuffer};

pub(crate) fn unsupported(kind: CorruptionKind, family: Family) -> Error {
    Error::UnsupportedKind(format!("{kind} is not a {family:?} corruption"))
}

/// Everything a corruption needs besides the image and its spec.
#[derive(Debug, Clone, Default)]
pub struct CorruptionContext {
    pub table: SeverityTable,
    pub frost: FrostSource,
}

impl CorruptionContext {
    pub fn new(table: SeverityTable, frost: FrostSource) -> Self {
        CorruptionContext { table, frost }
    }
}

/// Applies `spec` with the procedural frost source.
pub fn apply_corruption(img: &ImageBuffer, spec: &CorruptionSpec, table: &SeverityTable) -> Result<ImageBuffer> {
    apply_with_frost(img, spec, table, &FrostSource::Procedural)
}

pub fn apply_corruption_with(img: &ImageBuffer, spec: &CorruptionSpec, ctx: &CorruptionContext) -> Result<ImageBuffer> {
    apply_with_frost(img, spec, &ctx.table, &ctx.frost)
}

fn apply_with_frost(
    img: &ImageBuffer,
    spec: &CorruptionSpec,
    table: &SeverityTable,
    frost: &FrostSource,
) -> Result<ImageBuffer> {
    img.require_corruption_size()?;
    let params = table.level(spec.kind, spec.severity)?;
    let mut rng = DeterministicRng::new(spec.seed);
    let out = match spec.kind.family() {
        Family::Noise => apply_noise(img, spec.kind, params, &mut rng),
        Family::Blur => apply_blur(img, spec.kind, params, &mut rng),
        Family::Weather => apply_weather(img, spec.kind, params, frost, &mut rng),
        Family::Tone => apply_tone(img, spec.kind, params, &mut rng),
        Family::Digital => apply_digital(img, spec.kind, params, &mut rng),
    }?;
    debug_assert_eq!(out.dims(), img.dims());
    Ok(out)
}
