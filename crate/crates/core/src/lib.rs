//! Exact-arithmetic smoothness auditing for quotients of complex tori by
//! finite matrix groups.
//!
//! A complex torus `A = C^n / Λ` is modeled integrally: the lattice `Λ` is
//! `Z^{2n}` in a fixed basis and the complex structure is a rational matrix
//! generating an imaginary quadratic algebra. A finite group `G` of lattice
//! automorphisms commuting with the complex structure acts on `A`, and the
//! quotient `A/G` is smooth if and only if the stabilizer of every point is
//! generated by pseudoreflections (the Chevalley–Shephard–Todd criterion).
//! All arithmetic is exact; there are no floating-point numbers anywhere.
//!
//! Module layout:
//! - [`exact`] — integer/rational matrices, Hermite/Smith normal forms,
//!   lattice arithmetic (saturation, meet/join, quotient structure);
//! - [`groups`] — finite matrix groups: closure, pseudoreflection detection,
//!   orbit–stabilizer on torsion points, affine extensions;
//! - [`torus`] — complex tori, subtori, isogeny kernels, invariant forms;
//! - [`catalog`] — built-in scenario constructors and lattice data ingestion;
//! - [`smooth`] — stabilizer reports, fixed-locus strata, smoothness audits.

pub mod catalog;
pub mod exact;
pub mod groups;
pub mod smooth;
pub mod torus;

use thiserror::Error;

/// Unified error type for every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An enumeration (group closure, orbit, coset listing) outgrew its cap.
    #[error("{what} exceeded the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    /// Arguments live in incompatible ambient spaces or have mismatched ranks.
    #[error("incompatible arguments: {0}")]
    Mismatch(String),
    /// A required lattice containment does not hold.
    #[error("containment violated: {0}")]
    NotContained(String),
    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A data file failed validation; the message names the violated invariant.
    #[error("data rejected: {0}")]
    DataValidation(String),
    /// A search that is guaranteed to succeed on valid input found nothing.
    #[error("no suitable element: {0}")]
    NotFound(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
