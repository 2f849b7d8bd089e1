use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Parity};
use crate::exact::{Rational, UniPoly};

use super::build::{build_tensor_with, BuildOptions};
use super::tensor::{BracketTensor, Provenance};
use super::BracketError;

/// Number of affine coordinates of a family member (`9 − 1`).
pub const FAMILY_COORDS: usize = 8;

/// The nine tensors spanning a family: the value at the origin followed by
/// one difference per coefficient direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBasis {
    pub parity: Parity,
    pub k: u32,
    #[serde(rename = "basis")]
    pub tensors: Vec<BracketTensor>,
    pub labels: Vec<String>,
}

pub fn family_labels(parity: Parity) -> Vec<String> {
    let mut l = vec!["const".to_string()];
    if parity == Parity::Odd {
        l.push("c".into());
    }
    l.extend((0..3).map(|i| format!("Q{i}")));
    l.extend((0..=parity.p_degree_bound()).map(|i| format!("P{i}")));
    l
}

/// Curve with affine coordinates `v`: even `(Q₀,Q₁,Q₂,P₀..P₄)`, odd `(c,Q₀,Q₁,Q₂,P₀..P₃)`.
pub fn family_point(parity: Parity, k: u32, v: &[Rational]) -> Result<CurveModel, BracketError> {
    if v.len() != FAMILY_COORDS {
        return Err(BracketError::DimensionMismatch {
            expected: FAMILY_COORDS,
            found: v.len(),
        });
    }
    let model = match parity {
        Parity::Even => CurveModel::even(
            k,
            UniPoly::from_coeffs(v[0..3].to_vec()),
            UniPoly::from_coeffs(v[3..8].to_vec()),
        ),
        Parity::Odd => CurveModel::odd(
            k,
            v[0].clone(),
            UniPoly::from_coeffs(v[1..4].to_vec()),
            UniPoly::from_coeffs(v[4..8].to_vec()),
        ),
    };
    Ok(model?)
}

pub fn build_family(parity: Parity, k: u32) -> Result<FamilyBasis, BracketError> {
    build_family_with(parity, k, BuildOptions::default())
}

pub fn build_family_with(
    parity: Parity,
    k: u32,
    opts: BuildOptions,
) -> Result<FamilyBasis, BracketError> {
    if k == 0 {
        return Err(BracketError::Curve(crate::curve::CurveError::InvalidModel(
            "k must be at least 1".into(),
        )));
    }
    let labels = family_labels(parity);
    let origin = vec![Rational::zero(); FAMILY_COORDS];
    let b0 = build_tensor_with(&family_point(parity, k, &origin)?, opts)?;
    let mut tensors = vec![b0.clone()];
    for i in 0..FAMILY_COORDS {
        let mut v = origin.clone();
        v[i] = Rational::one();
        let bi = build_tensor_with(&family_point(parity, k, &v)?, opts)?;
        let mut d = bi.add_scaled(&b0, &-Rational::one());
        d.curve = None;
        d.provenance = Provenance::Combination {
            terms: vec![
                (format!("B({})", labels[i + 1]), Rational::one()),
                ("B(0)".into(), -Rational::one()),
            ],
        };
        tensors.push(d);
    }
    Ok(FamilyBasis {
        parity,
        k,
        tensors,
        labels,
    })
}

impl FamilyBasis {
    /// `B₀ + Σ vᵢ·Bᵢ`: the member at affine coordinates `v`.
    pub fn reconstruct(&self, v: &[Rational]) -> BracketTensor {
        assert_eq!(v.len(), FAMILY_COORDS);
        let mut coeffs = vec![Rational::one()];
        coeffs.extend(v.iter().cloned());
        self.combination(&coeffs)
    }

    /// `Σ λᵢ·Bᵢ` over all nine basis tensors.
    pub fn combination(&self, lambda: &[Rational]) -> BracketTensor {
        let refs: Vec<&BracketTensor> = self.tensors.iter().collect();
        BracketTensor::linear_combination(&refs, lambda, &self.labels)
    }
}
