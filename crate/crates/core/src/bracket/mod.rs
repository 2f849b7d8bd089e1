//! Quadratic bracket tensors built from the Szegő kernel and the curve
//! derivation, and the nine-member families obtained by varying the curve.

mod build;
mod family;
mod tensor;

pub use build::{
    build_tensor, build_tensor_generic, build_tensor_with, odd_twist, pair_expression,
    BuildOptions, CorrectionOperators, DEFAULT_SIGN,
};
pub use family::{
    build_family, build_family_with, family_labels, family_point, FamilyBasis, FAMILY_COORDS,
};
pub use tensor::{BracketTensor, Provenance, QuadForm};

use crate::curve::CurveError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("pair ({a}, {b}) leaves the section space: {excess}")]
    TensorNotInSectionSpace { a: usize, b: usize, excess: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl From<crate::exact::ExactError> for BracketError {
    fn from(e: crate::exact::ExactError) -> Self {
        BracketError::Curve(CurveError::Exact(e))
    }
}
