use thiserror::Error;

/// Errors raised while building or verifying a construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{function} series did not converge after {terms} terms at z = {z}")]
    SeriesNotConverged {
        function: &'static str,
        terms: usize,
        z: f64,
    },

    #[error("analytic seed backend unavailable ({0}); use the numeric backend")]
    BackendUnavailable(String),

    #[error("singular at x = {x}: {what}")]
    Singular { x: f64, what: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("QR iteration did not converge; {} eigenvalues found before stopping", partial.len())]
    EigenNotConverged { partial: Vec<num_complex::Complex64> },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
