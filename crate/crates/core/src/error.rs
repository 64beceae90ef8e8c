use thiserror::Error;

/// Errors raised by the library. Every variant maps to a domain error (exit
/// status 1) in the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a split Z-form: {0}")]
    NotSplitZForm(String),
    #[error("{scalar} does not lie in {ring}")]
    NotInRing { scalar: String, ring: String },
    #[error("{integer} is not invertible over {ring}")]
    NotInvertible { integer: String, ring: String },
    #[error("index above top weight: p = {p}, top = {top}")]
    IndexAboveTop { p: i64, top: i64 },
    #[error("index below bottom weight: p = {p}, bottom = {bottom}")]
    IndexBelowBottom { p: i64, bottom: i64 },
    #[error("no extension: {0}")]
    NoExtension(String),
    #[error("pole at z = {0}")]
    Pole(String),
    #[error("input is not parity-homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ValuationOfZero => "valuation_of_zero",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NotSplitZForm(_) => "not_split_zform",
            Error::NotInRing { .. } => "not_in_ring",
            Error::NotInvertible { .. } => "not_invertible",
            Error::IndexAboveTop { .. } => "index_above_top",
            Error::IndexBelowBottom { .. } => "index_below_bottom",
            Error::NoExtension(_) => "no_extension",
            Error::Pole(_) => "pole",
            Error::NotHomogeneous(_) => "not_homogeneous",
            Error::Parse(_) => "parse",
            Error::CheckFailed(_) => "check_failed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
