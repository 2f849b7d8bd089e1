use crate::exact::{Poly, Rational};

use super::element::CurveElement;
use super::model::{CurveModel, Parity};
use super::CurveError;

/// The section space `ℱ_N` with its monomial basis: `tⁱ` for `i ≤ k`, then
/// `tʲ·x` for `j ≤ k−2` (even) or `j ≤ k−1` (odd).
#[derive(Debug, Clone)]
pub struct SectionSpace {
    model: CurveModel,
    basis: Vec<CurveElement>,
}

impl SectionSpace {
    pub fn new(model: &CurveModel) -> Self {
        let k = model.k() as usize;
        let mut basis: Vec<CurveElement> =
            (0..=k).map(|i| model.pow(&model.t(), i as u32)).collect();
        let x = model.x();
        for j in 0..Self::x_count(model) {
            basis.push(model.mul(&model.pow(&model.t(), j as u32), &x));
        }
        SectionSpace {
            model: model.clone(),
            basis,
        }
    }

    fn x_count(model: &CurveModel) -> usize {
        let k = model.k() as usize;
        match model.parity() {
            Parity::Even => k - 1,
            Parity::Odd => k,
        }
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CurveElement] {
        &self.basis
    }

    /// Index of the basis vector `tⁱ` (`x = 0`) or `tⁱ·x` (`x = 1`).
    pub fn index_of(&self, x_power: u16, t_power: u16) -> Option<usize> {
        let k = self.model.k() as usize;
        let i = t_power as usize;
        match x_power {
            0 if i <= k => Some(i),
            1 if i < Self::x_count(&self.model) => Some(k + 1 + i),
            _ => None,
        }
    }

    /// Coordinates of `e` in the basis.
    pub fn membership_extract(&self, e: &CurveElement) -> Result<Vec<Rational>, CurveError> {
        let (alpha, beta) = self.model.to_x_repr(e)?;
        let mut out = vec![Rational::zero(); self.dim()];
        let mut excess = Vec::new();
        for (xp, poly) in [(0u16, &alpha), (1, &beta)] {
            for (i, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match self.index_of(xp, i as u16) {
                    Some(idx) => out[idx] = c.clone(),
                    None => excess.push(format!("{c}*t^{i}{}", if xp == 1 { "*x" } else { "" })),
                }
            }
        }
        if excess.is_empty() {
            Ok(out)
        } else {
            Err(CurveError::NotInSpace {
                excess: excess.join(" + "),
            })
        }
    }

    /// Coefficient matrix `T[u][v]` of a two-point element given in the
    /// `x`-basis (`[d00, d10, d01, d11]` over `t1, t2`), as an element of
    /// `ℱ ⊗ ℱ`. The second slot is expanded first; every monomial must land on
    /// a basis pair.
    pub fn extract_tensor(&self, d: &[Poly; 4]) -> Result<Vec<Vec<Rational>>, CurveError> {
        let n = self.dim();
        let mut out = vec![vec![Rational::zero(); n]; n];
        let mut excess = Vec::new();
        for (slot, poly) in d.iter().enumerate() {
            let (x1, x2) = ((slot & 1) as u16, (slot >> 1) as u16);
            for (m, c) in poly.terms() {
                let e = m.exps();
                let v = self.index_of(x2, e[1]);
                let u = self.index_of(x1, e[0]);
                match (u, v) {
                    (Some(u), Some(v)) => out[u][v] = c.clone(),
                    _ => excess.push(format!(
                        "{c}*t1^{}{}*t2^{}{}",
                        e[0],
                        if x1 == 1 { "*x1" } else { "" },
                        e[1],
                        if x2 == 1 { "*x2" } else { "" }
                    )),
                }
            }
        }
        if excess.is_empty() {
            Ok(out)
        } else {
            Err(CurveError::NotInSpace {
                excess: excess.join(" + "),
            })
        }
    }
}
