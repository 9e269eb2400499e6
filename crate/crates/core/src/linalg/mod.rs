//! Exact linear algebra over `Z`, `Z/p^N` and `Zp` truncated at precision `N`.

mod complex;
mod int_matrix;
pub mod modular;
mod snf;
mod truncated;

pub use complex::{complex_cohomology, CochainComplex};
pub use int_matrix::IntMatrix;
pub use snf::{cokernel_structure, snf, snf_truncated, SnfResult};
pub use truncated::{PadicContext, TruncatedEntry, TruncatedMatrix};

use thiserror::Error;

/// Coefficient ring of a matrix or complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Integers,
    Modular { p: u64, n: u32 },
    Padic { p: u64, precision: u32 },
}

impl Base {
    pub fn prime(&self) -> Option<u64> {
        match *self {
            Base::Integers => None,
            Base::Modular { p, .. } | Base::Padic { p, .. } => Some(p),
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match *self {
            Base::Integers => None,
            Base::Modular { n, .. } => Some(n),
            Base::Padic { precision, .. } => Some(precision),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("precision exhausted at p^{precision}")]
    PrecisionExhausted { precision: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("d^{} d^{} is not zero", .degree + 1, .degree)]
    NonzeroComposite { degree: i64 },
    #[error("degree {0} is outside the complex")]
    DegreeOutOfRange(i64),
    #[error("{p}^{n} is outside the supported machine-word range")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("invalid base: {0}")]
    InvalidBase(String),
}
