//! Exact construction and verification of graded derivation-simple algebras
//! and the Witt/Weyl-type Lie color algebras built from them.
//!
//! A session is configured by a finite abelian grading group with a
//! skew-symmetric bicharacter, a four-block signature of variable slots, a
//! free eigenvalue group embedded in rational space with a hat map into the
//! plus colors, and optionally a twisted coefficient table on a subgroup of
//! plus colors. From that data the crate builds:
//!
//! - the color-commutative algebra with its twisted product ([`algebra`]),
//! - the canonical commuting derivations, their classification, and a
//!   machine-checkable descent witnessing graded simplicity under the
//!   derivation action ([`derivations`]),
//! - the Witt- and Weyl-type operator algebras with their color bracket,
//!   derived subalgebras, centers and certificate-producing simplicity
//!   checks ([`weyl`]).
//!
//! All arithmetic is exact: scalars live in the rationals extended by a
//! session root of unity ([`scalar`]), and the linear algebra is generic
//! over the scalar field through `num-traits` bounds ([`linalg`]).
//!
//! The [`config`] module loads declarative TOML/JSON session files and
//! [`suite`] runs the seeded, deterministic verification suites behind the
//! command-line driver.

pub mod algebra;
pub mod config;
pub mod derivations;
pub mod grading;
pub mod linalg;
pub mod rat;
pub mod report;
pub mod scalar;
pub mod session;
pub mod structure;
pub mod suite;
pub mod weyl;

#[cfg(test)]
pub(crate) mod testutil;

/// Concrete scalar of a session: the rationals extended by the session root
/// of unity.
pub type Scalar = scalar::Cyclotomic;

/// Concrete exact rational used for eigenvalues and coefficients.
pub type Rational = rat::Rat;

pub use algebra::{AlgebraElement, BasisIndex};
pub use grading::{Grading, GradingGroup, GroupElement, SignClass};
pub use report::{ValidationReport, Violation};
pub use session::{Session, SessionOptions, Truncation};
pub use structure::{GammaZeroData, GroupG, KSignature};
