use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("n not a power of two (got {0})")]
    NotPowerOfTwo(usize),
    #[error("grid too small: n = {0}, need n >= 8")]
    GridTooSmall(usize),
    #[error("box length must be positive (got {0})")]
    NonPositiveLength(f64),
    #[error("invalid flow parameters: {0}")]
    InvalidParams(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("component mismatch: expected {expected}, got {got}")]
    ComponentMismatch { expected: usize, got: usize },
    #[error("input not solenoidal (max longitudinal component {0:e})")]
    NotSolenoidal(f64),
    #[error("field not band-limited to the dealiased zone")]
    NotBandLimited,
    #[error("support too large for rescale by 2^{0}")]
    SupportTooLarge(u32),
    #[error("invalid exponent p = {0}; need p >= 1")]
    InvalidExponent(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty series")]
    EmptySeries,
    #[error("zero block: Delta_{0} f vanishes")]
    ZeroBlock(i32),
    #[error("input not supported on the ring of block {0}")]
    NotRingSupported(i32),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("non-finite state at step {0}")]
    NonFiniteState(usize),
    #[error("zero right-hand side in weighted estimate")]
    ZeroRightSide,
    #[error("config parse error at line {line}, column {column}: {msg}")]
    ConfigParse { line: usize, column: usize, msg: String },
    #[error("{field} {msg}")]
    ConfigValidation { field: String, msg: String },
    #[error("bad magic in snapshot")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),
    #[error("payload length mismatch: expected {expected} bytes, found {found}")]
    PayloadLength { expected: usize, found: usize },
    #[error("empty rows")]
    EmptyRows,
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
