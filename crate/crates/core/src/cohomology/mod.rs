//! Continuous cohomology of `Zp^x` with coefficients in weight modules.
//!
//! Two independent routes: [`units_cohomology`] works on a small total
//! complex over `Zp` with tracked precision; [`continuous_via_quotients`]
//! computes bar-complex cohomology of the finite quotients `(Z/p^r)^x` and
//! reads off the continuous answer once it stabilizes.

mod anchor;
mod bar;
mod cyclic;
mod group;
mod procyclic;
mod quotients;
mod structured;
mod weight;

pub use anchor::{anchor_valuation, predicted_valuation, verify_anchor, ANCHOR_RANGE};
pub use bar::{bar_cohomology_finite, BarComplex};
pub use cyclic::cyclic_cohomology;
pub use group::FiniteGroupData;
pub use procyclic::procyclic_cohomology;
pub use quotients::{continuous_via_quotients, continuous_via_quotients_partial, BruteConfig};
pub use structured::{units_cohomology, PrecisionConfig};
pub use weight::{procyclic_generator, torsion_generator, WeightModule};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;
use crate::module::ModuleExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Structured,
    Brute,
    Procyclic,
    Cyclic,
    Bar,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Structured => "structured",
            Route::Brute => "brute",
            Route::Procyclic => "procyclic",
            Route::Cyclic => "cyclic",
            Route::Bar => "bar",
        })
    }
}

/// Refinement level at which a degree was certified: the coefficient
/// precision `N`, and for the quotient route the levels `r <= R` of the
/// finite quotients whose inflation image was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub precision: u32,
    pub level: Option<u32>,
    pub target_level: Option<u32>,
}

impl Certificate {
    pub fn precision(n: u32) -> Self {
        Certificate { precision: n, level: None, target_level: None }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}", self.precision)?;
        match (self.level, self.target_level) {
            (Some(r), Some(big)) if big != r => write!(f, " r={r} R={big}"),
            (Some(r), _) => write!(f, " r={r}"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub p: u64,
    pub route: Route,
    /// `degrees[s]` is `H^s`.
    pub degrees: Vec<ModuleExpr>,
    pub certificates: Vec<Certificate>,
}

impl CohomologyResult {
    pub fn degree(&self, s: usize) -> Option<&ModuleExpr> {
        self.degrees.get(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("precision exhausted at p^{precision}")]
    PrecisionExhausted { precision: u32 },
    #[error("bar complex needs {needed} dense entries, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("no stabilization in degree {degree}: {detail}")]
    NoStabilization { degree: usize, detail: String },
    #[error("not a group: {0}")]
    InvalidGroup(String),
    #[error("action is not a homomorphism to units: {0}")]
    InvalidAction(String),
    #[error("valuation identity fails at w = {w}: expected {expected}, found {found}")]
    AnchorFailed { w: i64, expected: u32, found: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Linalg(LinalgError),
}

impl From<LinalgError> for CohomologyError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::PrecisionExhausted { precision } => {
                CohomologyError::PrecisionExhausted { precision }
            }
            other => CohomologyError::Linalg(other),
        }
    }
}
