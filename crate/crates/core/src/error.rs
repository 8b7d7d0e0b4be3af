//! Error type shared by every module.
//!
//! Variants are grouped by the contract they report on: scalar arithmetic,
//! polynomial arithmetic, ideal computations, localization, the elimination
//! pipeline, and input handling. The CLI maps them onto exit codes.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Inversion of a non-unit scalar was requested.
    #[error("not a unit in the coefficient ring")]
    NotAUnit,
    /// Two operands live over different rings.
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    /// A ring description failed validation (duplicate vars, bad modulus, ...).
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    /// Division asked for a divisor that is not monic in the given variable.
    #[error("divisor is not monic in {0}")]
    NotMonic(String),
    /// A matrix has the wrong shape for the requested operation.
    #[error("shape error: {0}")]
    ShapeError(String),
    /// A computation exceeded its resource cap (pair limit, search budget).
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    /// The input row/matrix is not unimodular; carries the Gröbner basis of
    /// the maximal-minor ideal that failed to contain 1.
    #[error("input is not unimodular (maximal-minor ideal basis: {})", minors_basis.join(", "))]
    NotUnimodular { minors_basis: Vec<String> },
    /// The ideal handed to the maximal-ideal search is the whole ring.
    #[error("ideal is not proper")]
    NotProper,
    /// The maximal-ideal search ran out of candidates or budget.
    #[error("maximal ideal search exhausted: {0}")]
    SearchExhausted(String),
    /// Inversion in a localization was requested for an element of the
    /// maximal ideal.
    #[error("element lies in the maximal ideal and is not a local unit")]
    NotLocalUnit,
    /// No row entry is monic (up to a unit constant) in the chosen variable.
    #[error("no entry is monic in {0}")]
    NoMonicEntry(String),
    /// The row fails to be unimodular over the localization.
    #[error("row is not unimodular over the localization")]
    NotUnimodularLocally,
    /// The row is too short for normalization over this coefficient ring.
    #[error("row too short: {0}")]
    RowTooShort(String),
    /// The bounded search for a normalizing change of variables failed.
    #[error("normalization search exhausted: {0}")]
    NormalizationExhausted(String),
    /// The local denominators do not generate the unit ideal.
    #[error("local denominators are not comaximal")]
    DenominatorsNotComaximal,
    /// Input text or JSON could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal invariant failed; indicates a bug, never bad input.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
