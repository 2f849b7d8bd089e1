//! Exact construction and certification of quadratic Poisson brackets built
//! from the Szegő kernel of a genus-one curve.
//!
//! The main entry points are [`bracket::build_tensor`] and
//! [`bracket::build_family`]; [`verify`] holds the Jacobi, compatibility and
//! rank checks, and [`helix`] the K-theory arithmetic.

#![allow(clippy::needless_range_loop)]

pub mod bracket;
pub mod curve;
pub mod exact;
pub mod helix;
pub mod verify;

pub use bracket::{BracketError, BracketTensor, FamilyBasis};
pub use curve::{CurveError, CurveModel, Parity};
pub use exact::{Rational, UniPoly};
pub use helix::K0Class;
pub use verify::{CompatReport, JacobiWitness, RankReport};
