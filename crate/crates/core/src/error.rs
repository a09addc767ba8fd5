//! Error type shared by the numeric modules.

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Inverse of a (near-)zero quaternion was requested.
    ZeroInverse,
    /// A parameter that must be nonzero was zero; carries the parameter name.
    ZeroParameter(&'static str),
    /// Operation requires a square matrix.
    NonSquare { rows: usize, cols: usize },
    /// Matrix dimensions do not conform.
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Elimination hit a pivot below the singularity threshold; carries the
    /// offending pivot magnitude.
    Singular { pivot: f64 },
    /// A numeric argument was outside its domain.
    Domain(&'static str),
    /// Frequency point lies outside the base cell of the partition.
    OutsideBaseCell { omega1: f64, omega2: f64 },
    /// Filter bank is not admissible: the system matrix is singular (or the
    /// single-channel response vanishes) at the carried frequency.
    InadmissibleBank { omega1: f64, omega2: f64 },
    /// Samples and interpolants were built from different partitions.
    PartitionMismatch,
    /// LCT matrix parameters violate `det = 1` or `b != 0`.
    InvalidLctParams(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInverse => write!(f, "zero has no inverse"),
            Error::ZeroParameter(name) => write!(f, "parameter `{name}` must be nonzero"),
            Error::NonSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::DimensionMismatch { left, right } => write!(
                f,
                "dimension mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::Singular { pivot } => {
                write!(f, "matrix is numerically singular (pivot {pivot:e})")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::OutsideBaseCell { omega1, omega2 } => {
                write!(f, "({omega1}, {omega2}) lies outside the base cell")
            }
            Error::InadmissibleBank { omega1, omega2 } => {
                write!(f, "filter bank not admissible at ({omega1}, {omega2})")
            }
            Error::PartitionMismatch => {
                write!(f, "samples and interpolants use different partitions")
            }
            Error::InvalidLctParams(msg) => write!(f, "invalid LCT parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
