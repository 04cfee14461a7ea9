use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid dimensions, grids or policies.
    #[error("configuration error: {0}")]
    Config(String),

    /// Non-finite or otherwise malformed numeric input.
    #[error("input error: {0}")]
    Input(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    /// Outside the support of a density.
    #[error("domain error: {0}")]
    Domain(String),

    /// The per-stream rate sits exactly on a regime boundary.
    #[error(
        "boundary error: R/M = {per_stream_rate} equals log2(M/{regime_above}), the boundary between regimes m={regime_above} and m={regime_below}"
    )]
    Boundary {
        per_stream_rate: f64,
        /// Regime that applies just above the boundary rate.
        regime_above: usize,
        /// Regime that applies just below it.
        regime_below: usize,
    },

    #[error("applicability error: requires K > M²(L-1), got K={block_len} <= {bound}")]
    Applicability { block_len: usize, bound: usize },

    #[error("insufficient data: slope fit needs at least 3 eligible points, found {found}")]
    InsufficientData { found: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
