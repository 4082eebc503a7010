use thiserror::Error;

/// Errors raised by the library.
///
/// The variants are grouped by how the CLI maps them to exit codes:
/// parse/shape problems (exit 2), guard and domain violations (exit 3),
/// and internal consistency failures detected by cross-checks (exit 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("formula is not in prenex normal form: {0}")]
    NotPrenex(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),

    #[error("arity mismatch for `{symbol}`: declared {declared}, used with {used}")]
    ArityMismatch {
        symbol: String,
        declared: usize,
        used: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
