//! Exact arithmetic: rationals, polynomials, a quadratic extension and
//! truncated Laurent series. No floating point is used anywhere in here.

pub mod linalg;
pub mod poly;
pub mod quadext;
pub mod rational;
pub mod series;
pub mod unipoly;

pub use poly::{exact_div_linear, poly_arith, poly_derivative, Monomial, Poly, PolyOp, Vars};
pub use quadext::QuadExtElem;
pub use rational::{q, Rational};
pub use series::{series_invert, series_sqrt, LaurentSeries};
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("variable context mismatch: {left:?} vs {right:?}")]
    ContextMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("division by {divisor} leaves remainder {remainder}")]
    NonzeroRemainder { divisor: String, remainder: String },
    #[error("series has zero leading coefficient")]
    ZeroLeading,
    #[error("square root not representable: {0}")]
    SqrtNotRepresentable(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error(
        "coefficient of exponent {needed} requested but series is only known below {available}"
    )]
    InsufficientPrecision { needed: i64, available: i64 },
}
