//! Crate-wide error type.

use std::fmt;

use crate::bipoly::BiDegree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Syntax error in the polynomial grammar, with a byte position.
    Parse { pos: usize, msg: String },
    /// A parsed term does not have the expected bidegree.
    DegreeMismatch {
        pos: usize,
        term: String,
        found: BiDegree,
        expected: BiDegree,
    },
    /// An operation combined polynomials of different bidegrees.
    BidegreeConflict { left: BiDegree, right: BiDegree },
    ZeroDenominator,
    /// A rational input cannot be reduced modulo the working prime.
    DenominatorDivisibleByP(u64),
    BadPrime(u64),
    /// Vector length does not match the ambient dimension.
    AmbientMismatch { expected: usize, found: usize },
    /// The curve section is zero or its bidegree is not positive.
    InvalidCurve(String),
    /// The top-degree ring piece is not one-dimensional, so no trace
    /// functional is determined.
    TopPieceNotLine { dim: usize },
    /// The multiplication probe requires a section independent from the
    /// defining one.
    ProportionalSection,
    /// The operation requires larger bidegree than the given curve.
    DegreeTooSmall { d: i64, e: i64, needs: i64 },
    /// The certification requires a positive number of trials.
    NoTrials,
    /// The certification pipeline requires a smoothness certificate first.
    NotCertifiedSmooth,
    Io(String),
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::DegreeMismatch {
                pos,
                term,
                found,
                expected,
            } => write!(
                f,
                "term `{term}` at byte {pos} has bidegree {found} instead of {expected}"
            ),
            Error::BidegreeConflict { left, right } => {
                write!(f, "bidegree mismatch: {left} vs {right}")
            }
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::DenominatorDivisibleByP(p) => {
                write!(f, "denominator divisible by the working prime {p}")
            }
            Error::BadPrime(p) => write!(f, "{p} is not an odd prime below 2^31"),
            Error::AmbientMismatch { expected, found } => {
                write!(f, "vector of length {found} in ambient of dimension {expected}")
            }
            Error::InvalidCurve(msg) => write!(f, "invalid curve: {msg}"),
            Error::TopPieceNotLine { dim } => {
                write!(f, "top ring piece has dimension {dim}, not 1; no trace functional")
            }
            Error::ProportionalSection => {
                write!(f, "probe section is proportional to the curve section")
            }
            Error::DegreeTooSmall { d, e, needs } => {
                write!(f, "bidegree ({d},{e}) too small; needs both at least {needs}")
            }
            Error::NoTrials => write!(f, "at least one trial is required"),
            Error::NotCertifiedSmooth => {
                write!(f, "curve is not certified smooth; run smoothness certification first")
            }
            Error::Io(msg) => write!(f, "io error: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
