//! Derived p-completion, continuous cohomology of the units of `Zp` with
//! weight coefficients, and the two-column derived-completion spectral
//! sequence.

pub mod cohomology;
pub mod lfunctor;
pub mod linalg;
pub mod module;
pub mod ss;

pub use module::{Atom, ModuleExpr, ParseError};
