use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Violation;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Torus sides below 3 produce multigraphs.
    TorusTooSmall {
        lx: usize,
        ly: usize,
    },
    /// Graph fails one or more structural checks.
    InvalidGraph(Vec<Violation>),
    /// Dual of the graph would not be a simple graph.
    DualNotSimple {
        edge: usize,
        reason: &'static str,
    },
    /// Coset enumeration ran out of room.
    CapacityExceeded {
        max_cosets: usize,
    },
    DegenerateQuotient(String),
    IncompatibleMatrices {
        left: (usize, usize),
        right: (usize, usize),
    },
    InvalidParameter(String),
    SingularSystem,
    GridOutOfRange {
        p: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TorusTooSmall { lx, ly } => {
                write!(f, "torus sides must be at least 3 (got {lx} x {ly})")
            }
            Error::InvalidGraph(v) => {
                write!(f, "invalid graph: {} violation(s)", v.len())?;
                for item in v.iter().take(8) {
                    write!(f, "; {item}")?;
                }
                Ok(())
            }
            Error::DualNotSimple { edge, reason } => {
                write!(f, "dual graph is not simple at edge {edge}: {reason}")
            }
            Error::CapacityExceeded { max_cosets } => {
                write!(f, "coset enumeration exceeded {max_cosets} live cosets")
            }
            Error::DegenerateQuotient(why) => write!(f, "degenerate quotient: {why}"),
            Error::IncompatibleMatrices { left, right } => write!(
                f,
                "incompatible matrices {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            Error::SingularSystem => write!(f, "singular least-squares system"),
            Error::GridOutOfRange { p } => write!(f, "grid point p = {p} outside [0, 1]"),
        }
    }
}

impl core::error::Error for Error {}
