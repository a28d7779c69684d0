//! Sampling verifier and point evaluator built on `djet-core`.
//!
//! [`run_compare`] draws seeded admissible points, evaluates the generic
//! pipeline and the closed-form model at each, and folds the discrepancies
//! and identity checks into a deterministic [`Report`]. [`run_eval`] prints
//! selected objects at a single point.

mod compare;
mod config;
mod eval;
mod model;
mod report;
mod sample;
pub mod suites;

pub use compare::run_compare;
pub use config::{ConfigError, SampleConfig, Tolerances};
pub use eval::{parse_point, run_eval, EvalOptions, Format, Pipeline, Selector};
pub use model::ModelSpec;
pub use report::{Discrepancy, IdentityResult, Metadata, Report, Verdict, Worst, SCHEMA};
pub use sample::sample_points;

use djet_core::bm4::Bm4Error;
use djet_core::geometry::GeometryError;
use djet_core::{ExprError, PointError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid {what}: {source}")]
    Parse { what: &'static str, source: ExprError },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bm4(#[from] Bm4Error),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error("sampling exhausted: {rejected} of {drawn} draws were not admissible")]
    SamplingExhausted { drawn: usize, rejected: usize },
    #[error("bad point {text:?}: {reason}")]
    BadPoint { text: String, reason: String },
    #[error("unknown object selector {0:?} (expected one of g, ginv, N, cartan, torsion, curvature, ricci, sc, einstein, em)")]
    UnknownSelector(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
