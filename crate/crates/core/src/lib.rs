//! Exact and asymptotic counts of permutation, monomial and semilinear
//! equivalence classes of linear codes over small finite fields.

pub mod asymptotics;
pub mod census;
pub mod combinatorics;
pub mod constants;
pub mod error;
pub mod field;
pub mod group;
pub mod interval;
pub mod subspace;
pub mod theta;

pub use combinatorics::{ExactCount, GroupKind};
pub use constants::{CertifiedInterval, Precision};
pub use error::{Error, Result};
pub use field::{make_field, FieldElement, FieldSpec};
pub use interval::Interval;
