//! Corruption-benchmark synthesis and robustness scoring for monocular depth estimation.
//!
//! The crate turns a clean image set into 18 corrupted variants at graded
//! severities, scores depth predictions with the DEE error, and rolls the
//! scores up into corruption error (CE) and resilience rate (RR) tables.

pub mod cli;
pub mod corruptions;
pub mod depthmetrics;
pub mod error;
pub mod harness;
pub mod imagecore;
pub mod robustness;
pub mod synth;

pub use error::{Error, Result};
