//! Genus-one curve families, their coordinate rings, the curve derivation,
//! section spaces and the algebraic Szegő kernel.

mod bielement;
mod element;
mod model;
mod residue;
mod section;

pub use bielement::{
    bivars, mult_kernel_antisym, BiCurveElement, BiRing, KernelReading, SzegoKernel,
};
pub use element::{CurveElement, RawExpr};
pub use model::{CurveModel, Parity};
pub use residue::{verify_szego_residues, verify_szego_residues_with, ResidueCertificate};
pub use section::SectionSpace;

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("invalid curve model: {0}")]
    InvalidModel(String),
    #[error("division by non-unit {0}")]
    DivisionByNonUnit(String),
    #[error("element not in section space; excess terms: {excess}")]
    NotInSpace { excess: String },
    #[error("degenerate divisor at infinity: {0}")]
    DegenerateDivisor(String),
    #[error("residue mismatch: {0}")]
    ResidueMismatch(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
