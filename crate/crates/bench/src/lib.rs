//! Benchmark fixtures shared by the criterion targets.

use szego_core::bracket::{build_tensor, BracketTensor};
use szego_core::exact::{q, UniPoly};
use szego_core::{CurveModel, Parity};

/// A fixed smooth curve for each parity, so timings compare across runs.
pub fn fixture_curve(parity: Parity, k: u32) -> CurveModel {
    let qq = UniPoly::from_coeffs(vec![q(1, 2), q(0, 1), q(1, 1)]);
    match parity {
        Parity::Even => {
            let p = UniPoly::from_coeffs(vec![q(3, 1), q(-1, 1), q(2, 1), q(0, 1), q(5, 1)]);
            CurveModel::even(k, qq, p).expect("valid even curve")
        }
        Parity::Odd => {
            let p = UniPoly::from_coeffs(vec![q(3, 1), q(-1, 1), q(2, 1), q(7, 2)]);
            CurveModel::odd(k, q(2, 1), qq, p).expect("valid odd curve")
        }
    }
}

pub fn fixture_tensor(parity: Parity, k: u32) -> BracketTensor {
    build_tensor(&fixture_curve(parity, k)).expect("fixture builds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_smooth() {
        for parity in [Parity::Even, Parity::Odd] {
            assert!(fixture_curve(parity, 2).is_smooth());
        }
    }
}
