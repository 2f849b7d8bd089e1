//! Certification of bracket tensors: chart descent, Jacobi and compatibility
//! checks, independence and pointwise rank.

mod chart;
mod jacobi;
mod rank;

pub use chart::{
    cone_vars, coordinate, descend_to_chart, linear_bracket, linear_form, monomial_sum,
    ratio_bracket, ChartBracket, MonomialTerm, RationalFunction,
};
pub use jacobi::{
    check_jacobi, compatibility_check, cone_jacobiator, jacobiator, mixed_compatibility_check,
    mixed_jacobiator, CompatReport, JacobiWitness, Multivector,
};
pub use rank::{
    independence_rank, random_point, random_rational, rank_at_point, rank_scan, rank_scan_with,
    tensor_rank, PencilReport, RankReport, DEFAULT_PENCILS, SAMPLE_BOUND,
};

use crate::bracket::BracketTensor;
use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("point must be nonzero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `E∧X` for the Euler field `E = Σ φ_a∂_a` and the linear field
/// `X = Σ_b (Σ_c x[b][c]·φ_c)∂_b`.
pub fn euler_wedge(t: &BracketTensor, x: &[Vec<Rational>]) -> BracketTensor {
    let n = t.n;
    assert!(
        x.len() == n && x.iter().all(|r| r.len() == n),
        "X must be n×n"
    );
    let mut out = BracketTensor::zero(t.parity, t.k, n);
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                // φ_a·X_b − φ_b·X_a
                out.add_coeff(a, b, a, c, &x[b][c]);
                out.add_coeff(a, b, b, c, &-&x[a][c]);
            }
        }
    }
    out
}
