//! Error type shared across the crate.

use std::fmt;

/// Errors produced by the wave-stability pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    Domain(String),
    /// A computation produced a non-finite value; carries the location when known.
    Numeric(String),
    /// Requested wave speed lies outside the family's admissible interval.
    Range(String),
    /// The profile is degenerate at the chosen origin (|phi''(0)| below tolerance).
    DegenerateProfile(String),
    /// |theta| below tolerance: the kernel cannot be certified simple, the
    /// classification machinery refuses to proceed.
    KernelNotSimple { theta: f64 },
    /// A classification hypothesis sits at its tolerance boundary (I or det(D)
    /// too close to zero to decide signs).
    AtThreshold(String),
    /// No sign change of I(k) found inside the expanded bracket.
    NoThreshold(String),
    /// Caller violated an internal contract (non-uniform grid, asymmetric matrix, ...).
    Contract(String),
    /// Two independent routes to the same quantity disagree; verdicts are blocked.
    Consistency(String),
    /// Bad command-line usage.
    Usage(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Numeric(m) => write!(f, "numeric error: {m}"),
            Error::Range(m) => write!(f, "range error: {m}"),
            Error::DegenerateProfile(m) => write!(f, "degenerate profile: {m}"),
            Error::KernelNotSimple { theta } => write!(
                f,
                "kernel not simple at tolerance: |theta| = {:.3e} below 1e-8",
                theta.abs()
            ),
            Error::AtThreshold(m) => write!(f, "at threshold: {m}"),
            Error::NoThreshold(m) => write!(f, "no threshold: {m}"),
            Error::Contract(m) => write!(f, "contract violation: {m}"),
            Error::Consistency(m) => write!(f, "consistency error: {m}"),
            Error::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
