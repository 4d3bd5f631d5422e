//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A truncated element was asked for a coefficient outside its window.
    Precision(String),
    /// An element violated the domain of an operation (wrong valuation shape,
    /// not a unit, not in the subgroup, ...).
    Domain(String),
    /// An equation has no solution (e.g. square root of a non-square).
    NoSolution(String),
    /// Two partial definitions of a character disagree on their overlap.
    Inconsistent(String),
    /// A quantity asserted to be a (non-negative) integer was not, within
    /// tolerance.
    NotIntegral { re: f64, im: f64 },
    /// Eigenvector separation failed after the configured number of rounds.
    Degenerate(String),
    /// A labelling step found no (or no unique) match.
    Labelling(String),
    /// Work was skipped because it exceeds the configured element cap.
    Budget { needed: u64, cap: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Precision(m) => write!(f, "precision: {m}"),
            Error::Domain(m) => write!(f, "domain: {m}"),
            Error::NoSolution(m) => write!(f, "no solution: {m}"),
            Error::Inconsistent(m) => write!(f, "inconsistent character data: {m}"),
            Error::NotIntegral { re, im } => {
                write!(f, "value {re}+{im}i is not integral within tolerance")
            }
            Error::Degenerate(m) => write!(f, "degenerate eigenspace: {m}"),
            Error::Labelling(m) => write!(f, "labelling: {m}"),
            Error::Budget { needed, cap } => {
                write!(f, "budget exceeded: needs {needed} elements, cap is {cap}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
