use thiserror::Error;

/// Errors produced anywhere in the radial pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis size: {splines} B-splines of order {order} (need at least {min})")]
    InvalidSize {
        splines: usize,
        order: usize,
        min: usize,
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("radius {r} outside the box [0, {r_max}]")]
    OutOfBox { r: f64, r_max: f64 },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("non-physical effective charge {charge} for Z={z}, n={n_electrons}")]
    NonPhysical {
        z: u32,
        n_electrons: u32,
        charge: f64,
    },
    #[error("overlap matrix is singular: {0}")]
    AssemblySingular(String),
    #[error("node count {nodes} disagrees with energy ordering index {index} for l={l}")]
    LabelInconsistency { l: u32, index: usize, nodes: usize },
    #[error("state {label} is not bound in this model")]
    MissingOrbital { label: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: u64,
        column: usize,
        reason: String,
    },
    #[error("duplicate reference label `{label}` for kind {kind} and source `{source_tag}`")]
    DuplicateLabel {
        label: String,
        kind: String,
        source_tag: String,
    },
    #[error("no computed row matches the reference table")]
    NoOverlap,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
