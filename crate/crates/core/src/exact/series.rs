//! Truncated Laurent series with coefficients in a quadratic extension.
//!
//! A series stores `Σ coeffs[i]·τ^(valuation + i) + O(τ^truncation_order)`.
//! Every operation computes the order it can actually guarantee from its
//! inputs, so truncation is tracked conservatively end to end.

use std::fmt;

use serde::Serialize;

use super::quadext::QuadExtElem;
use super::rational::Rational;
use super::ExactError;

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct LaurentSeries {
    pub variable: String,
    /// Exponent of `coeffs[0]`; `coeffs[0]` is nonzero unless the series is zero.
    pub leading_exponent: i64,
    pub coefficients: Vec<QuadExtElem>,
    /// Exclusive bound: terms from `τ^truncation_order` on are unknown.
    pub truncation_order: i64,
    #[serde(skip)]
    radicand: Rational,
}

impl LaurentSeries {
    /// Build from raw coefficients starting at `valuation`, known up to
    /// (excluding) `truncation_order`. Leading zeros are stripped.
    pub fn new(
        variable: &str,
        radicand: &Rational,
        valuation: i64,
        coeffs: Vec<QuadExtElem>,
        truncation_order: i64,
    ) -> Self {
        let mut s = LaurentSeries {
            variable: variable.to_string(),
            leading_exponent: valuation,
            coefficients: coeffs,
            truncation_order,
            radicand: radicand.clone(),
        };
        s.normalize();
        s
    }

    /// Series with rational coefficients.
    pub fn from_rationals(
        variable: &str,
        radicand: &Rational,
        valuation: i64,
        coeffs: &[Rational],
        truncation_order: i64,
    ) -> Self {
        let c = coeffs
            .iter()
            .map(|x| QuadExtElem::rational(x.clone(), radicand))
            .collect();
        Self::new(variable, radicand, valuation, c, truncation_order)
    }

    pub fn constant(variable: &str, c: QuadExtElem, truncation_order: i64) -> Self {
        let r = c.radicand.clone();
        Self::new(variable, &r, 0, vec![c], truncation_order)
    }

    fn normalize(&mut self) {
        let keep = (self.truncation_order - self.leading_exponent).max(0) as usize;
        self.coefficients.truncate(keep);
        let lead_zeros = self.coefficients.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coefficients.len() {
            self.coefficients.clear();
            self.leading_exponent = self.truncation_order;
        } else {
            self.coefficients.drain(..lead_zeros);
            self.leading_exponent += lead_zeros as i64;
        }
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    /// True when no known coefficient is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficient of `τ^e`; fails if `e` is beyond the known precision.
    pub fn coeff(&self, e: i64) -> Result<QuadExtElem, ExactError> {
        if e >= self.truncation_order {
            return Err(ExactError::InsufficientPrecision {
                needed: e,
                available: self.truncation_order,
            });
        }
        let idx = e - self.leading_exponent;
        Ok(if idx < 0 || idx as usize >= self.coefficients.len() {
            QuadExtElem::zero(&self.radicand)
        } else {
            self.coefficients[idx as usize].clone()
        })
    }

    /// Coefficient of `τ⁻¹`.
    pub fn residue(&self) -> Result<QuadExtElem, ExactError> {
        self.coeff(-1)
    }

    fn zero_elem(&self) -> QuadExtElem {
        QuadExtElem::zero(&self.radicand)
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let lo = self.leading_exponent.min(other.leading_exponent);
        let hi = self.truncation_order.min(other.truncation_order);
        let coeffs = (lo..hi.max(lo))
            .map(|e| &self.coeff(e).unwrap() + &other.coeff(e).unwrap())
            .collect();
        Self::new(&self.variable, &self.radicand, lo, coeffs, hi)
    }

    pub fn neg(&self) -> LaurentSeries {
        let coeffs = self.coefficients.iter().map(|c| -c).collect();
        Self::new(
            &self.variable,
            &self.radicand,
            self.leading_exponent,
            coeffs,
            self.truncation_order,
        )
    }

    pub fn scale(&self, c: &QuadExtElem) -> LaurentSeries {
        let coeffs = self.coefficients.iter().map(|a| a * c).collect();
        Self::new(
            &self.variable,
            &self.radicand,
            self.leading_exponent,
            coeffs,
            self.truncation_order,
        )
    }

    /// Multiply by `τ^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        Self::new(
            &self.variable,
            &self.radicand,
            self.leading_exponent + k,
            self.coefficients.clone(),
            self.truncation_order + k,
        )
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let val = self.leading_exponent + other.leading_exponent;
        let trunc = (self.leading_exponent + other.truncation_order)
            .min(other.leading_exponent + self.truncation_order);
        let len = (trunc - val).max(0) as usize;
        let mut out = vec![self.zero_elem(); len];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                if i + j < len {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(&self.variable, &self.radicand, val, out, trunc)
    }

    /// Multiplicative inverse to the same relative precision.
    pub fn invert(&self) -> Result<LaurentSeries, ExactError> {
        let c0 = self.coefficients.first().ok_or(ExactError::ZeroLeading)?;
        let c0_inv = c0.inverse().map_err(|_| ExactError::ZeroLeading)?;
        let n = self.coefficients.len();
        let mut inv: Vec<QuadExtElem> = Vec::with_capacity(n);
        inv.push(c0_inv.clone());
        for k in 1..n {
            let mut acc = self.zero_elem();
            for i in 1..=k {
                acc = &acc + &(&self.coefficients[i] * &inv[k - i]);
            }
            inv.push(-&(&acc * &c0_inv));
        }
        let val = -self.leading_exponent;
        Ok(Self::new(
            &self.variable,
            &self.radicand,
            val,
            inv,
            val + n as i64,
        ))
    }

    /// Square root with leading coefficient `+√c₀` (the other root is its negation).
    pub fn sqrt(&self) -> Result<LaurentSeries, ExactError> {
        let c0 = self.coefficients.first().ok_or(ExactError::ZeroLeading)?;
        if self.leading_exponent % 2 != 0 {
            return Err(ExactError::SqrtNotRepresentable(format!(
                "odd leading exponent {}",
                self.leading_exponent
            )));
        }
        let s0 = c0
            .sqrt()
            .ok_or_else(|| ExactError::SqrtNotRepresentable(c0.to_string()))?;
        let two_s0_inv = (&s0 + &s0).inverse().map_err(|_| {
            ExactError::SqrtNotRepresentable(format!("leading root {s0} is not invertible"))
        })?;
        let n = self.coefficients.len();
        let mut root: Vec<QuadExtElem> = Vec::with_capacity(n);
        root.push(s0);
        for k in 1..n {
            let mut acc = self.coefficients[k].clone();
            for i in 1..k {
                acc = &acc - &(&root[i] * &root[k - i]);
            }
            root.push(&acc * &two_s0_inv);
        }
        let val = self.leading_exponent / 2;
        Ok(Self::new(
            &self.variable,
            &self.radicand,
            val,
            root,
            val + n as i64,
        ))
    }
}

/// Free-function form of [`LaurentSeries::invert`].
pub fn series_invert(s: &LaurentSeries) -> Result<LaurentSeries, ExactError> {
    s.invert()
}

/// Free-function form of [`LaurentSeries::sqrt`].
pub fn series_sqrt(s: &LaurentSeries) -> Result<LaurentSeries, ExactError> {
    s.sqrt()
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(
                f,
                "({c})*{}^{} + ",
                self.variable,
                self.leading_exponent + i as i64
            )?;
        }
        write!(f, "O({}^{})", self.variable, self.truncation_order)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    fn rat(s: &[i64]) -> Vec<Rational> {
        s.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn geometric_series_inverse() {
        let r = q(1, 1);
        // τ(1 + τ)
        let s = LaurentSeries::from_rationals("tau", &r, 1, &rat(&[1, 1, 0, 0, 0, 0]), 7);
        let inv = series_invert(&s).unwrap();
        assert_eq!(inv.leading_exponent, -1);
        let expect = [1, -1, 1, -1, 1, -1];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(
                inv.coeff(-1 + i as i64).unwrap(),
                QuadExtElem::rational(q(*e, 1), &r)
            );
        }
        let one = s.mul(&inv);
        assert_eq!(one.coefficients[0], QuadExtElem::one(&r));
        assert!(one.coefficients[1..].iter().all(QuadExtElem::is_zero));
    }

    #[test]
    fn sqrt_of_pure_pole_lands_in_extension() {
        let a = q(7, 1);
        let s = LaurentSeries::from_rationals("tau", &a, -4, std::slice::from_ref(&a), 2);
        let root = series_sqrt(&s).unwrap();
        assert_eq!(root.leading_exponent, -2);
        assert_eq!(root.coefficients[0], QuadExtElem::sqrt_radicand(&a));
    }

    #[test]
    fn sqrt_squares_back_within_truncation() {
        let r = q(1, 1);
        // 4τ²(1 + τ)
        let s = LaurentSeries::from_rationals("tau", &r, 2, &rat(&[4, 4, 0, 0, 0, 0]), 8);
        let root = series_sqrt(&s).unwrap();
        assert_eq!(root.leading_exponent, 1);
        let expect = [q(2, 1), q(1, 1), q(-1, 4), q(1, 8)];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(root.coefficients[i], QuadExtElem::rational(e.clone(), &r));
        }
        let sq = root.mul(&root);
        assert_eq!(sq.truncation_order, s.truncation_order);
        for e in 2..8 {
            assert_eq!(sq.coeff(e).unwrap(), s.coeff(e).unwrap());
        }
    }

    #[test]
    fn sqrt_errors() {
        let r = q(2, 1);
        let odd = LaurentSeries::from_rationals("tau", &r, -3, &rat(&[1]), 2);
        assert!(matches!(
            series_sqrt(&odd),
            Err(ExactError::SqrtNotRepresentable(_))
        ));
        let three = LaurentSeries::from_rationals("tau", &r, 0, &rat(&[3]), 2);
        assert!(matches!(
            series_sqrt(&three),
            Err(ExactError::SqrtNotRepresentable(_))
        ));
        let zero = LaurentSeries::from_rationals("tau", &r, 0, &[], 2);
        assert!(matches!(series_invert(&zero), Err(ExactError::ZeroLeading)));
    }

    #[test]
    fn precision_is_tracked() {
        let r = q(1, 1);
        let s = LaurentSeries::from_rationals("tau", &r, -2, &rat(&[1, 2, 3]), 1);
        assert!(s.residue().is_ok());
        assert!(matches!(
            s.coeff(1),
            Err(ExactError::InsufficientPrecision { .. })
        ));
        let p = s.mul(&s);
        assert_eq!(p.truncation_order, -1);
        assert!(p.residue().is_err());
    }
}
