//! Exact commutative algebra over polynomial rings with rational, integer,
//! or prime-field coefficients: Groebner bases with certificates, Smith
//! normal form, and a constructive solver that completes unimodular rows
//! and matrices to invertible ones and extracts free bases of projective
//! modules.

pub mod cli;
pub mod driver;
pub mod elim;
pub mod error;
pub mod groebner;
pub mod horrocks;
pub mod local;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod snf;

pub use driver::UnimodSolution;
pub use error::{Error, Result};
pub use matrix::PolyMatrix;
pub use poly::{Monomial, MonomialOrder, Poly, Substitution};
pub use ring::{Coeff, CoeffKind, RingDesc};
