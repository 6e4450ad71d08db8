//! Mahler discrete residues and exact Mahler summability of rational functions.
//!
//! Given `f ∈ K(x)` and an integer `p ≥ 2`, [`mahler_report`] decides whether
//! `f = g(x^p) − g(x)` for some rational `g`, returning either a verified
//! certificate or the nonzero residues that obstruct summability.

pub mod error;
pub mod expr;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod ratfun;
pub mod poly;
pub mod residues;
pub mod series;
pub mod structure;
pub mod vcoeffs;

pub use error::{Error, FieldError, Result};
pub use field::{CycloElement, Field, FieldDescriptor, Radical, RadicalMonomial, TowerElement};

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// The scalar type of every rational function the engine manipulates.
pub type Scalar = TowerElement;
