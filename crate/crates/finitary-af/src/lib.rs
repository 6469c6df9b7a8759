//! Finite and finitary abstract argumentation frameworks: exact semantics,
//! tree encodings of extensions, and anytime decision procedures.

pub mod af;
pub mod decide;
pub mod error;
pub mod finitary;
pub mod oracle;
pub mod trees;

pub use af::{ArgumentId, Extension, FiniteAF, SemanticsKind};
pub use error::{AfError, Result};
pub use finitary::{truncate, FinitaryAF, Gadget, IndexMap, StageSet};
pub use oracle::{decide_finite, enumerate, grounded, DecisionProblem};
