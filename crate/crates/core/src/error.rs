use thiserror::Error;

/// Errors raised by field evaluation, geometry and the command-line harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis self-check failed: {0}")]
    BasisDefect(String),

    #[error("{primitive} evaluated outside its domain at argument {argument}")]
    Domain { primitive: &'static str, argument: String },

    #[error("point {point:?} lies outside the domain of chart `{chart}`")]
    OutsideChart { chart: String, point: [f64; 4] },

    #[error("tetrad of chart `{chart}` is singular at {point:?} (|det| = {det:e})")]
    SingularTetrad { chart: String, point: [f64; 4], det: f64 },

    #[error("metric is not Lorentzian (det g = {0:e})")]
    NonLorentzian(f64),

    #[error("matrix is not a Lorentz transformation (max |L^T eta L - eta| = {0:e})")]
    NotLorentz(f64),

    #[error("invalid gauge element: {0}")]
    InvalidGauge(String),

    #[error("linear coordinate map is singular (det = {0:e})")]
    SingularMap(f64),

    #[error("unsupported tensor valence: rank {0}")]
    UnsupportedValence(usize),

    #[error("unknown chart `{0}`")]
    UnknownChart(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
