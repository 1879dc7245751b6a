use alloc::string::String;
use core::fmt;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A requested order or index exceeds what is available.
    Range(String),
    /// Coefficient generation hit an internal inconsistency.
    Generation(String),
    /// A numerical procedure failed to converge or lost accuracy.
    Numeric(String),
    /// No sign change was found in the eigenvalue bracket.
    Bracket(String),
    /// A located eigenvalue could not be matched to the requested index.
    Identification(String),
    /// Malformed textual input.
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Range(m) => write!(f, "range error: {m}"),
            Error::Generation(m) => write!(f, "generation error: {m}"),
            Error::Numeric(m) => write!(f, "numeric error: {m}"),
            Error::Bracket(m) => write!(f, "bracket error: {m}"),
            Error::Identification(m) => write!(f, "identification error: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
