use thiserror::Error;

use crate::verify::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Attaches the offending parameter values to an evaluation error.
    pub fn at(self, params: &[(&str, f64)]) -> Self {
        let params = params.iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(", ");
        Error::AtPoint { params, source: Box::new(self) }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("index out of range: need index {needed} but sequence has {len} terms")]
    IndexOutOfRange { needed: usize, len: usize },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("point {re}{im:+}i is within {distance:e} of the cut [1, inf)")]
    SlitViolation { re: f64, im: f64, distance: f64 },

    #[error("quadrature did not converge: attained error estimate {estimate:e} (target {target:e})")]
    Quadrature { estimate: f64, target: f64 },

    #[error("series tail bound {bound:e} exceeds target {target:e} within the term budget")]
    InsufficientPrecision { bound: f64, target: f64 },

    #[error("leading coefficient of the divisor is zero")]
    DivisionByZero,

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("degenerate parameter point: {0}")]
    Degenerate(String),

    #[error("exact arithmetic requires tolerance 0")]
    InexactTolerance,

    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("hypothesis gate failed for {}: min margin {:e}", .0.claim_id, .0.min_margin)]
    HypothesisGate(Box<VerificationReport>),

    #[error("{source} (at {params})")]
    AtPoint {
        params: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
