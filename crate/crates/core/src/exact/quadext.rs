use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::ExactError;

/// An element `base + radical_coeff·√radicand` of `ℚ(√radicand)`.
///
/// The radicand is fixed per extension context and need not be a non-square:
/// when it is a rational square the arithmetic below is still correct, it just
/// is no longer a field (some nonzero elements have zero norm).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadExtElem {
    pub base: Rational,
    pub radical_coeff: Rational,
    pub radicand: Rational,
}

impl QuadExtElem {
    pub fn new(base: Rational, radical_coeff: Rational, radicand: Rational) -> Self {
        assert!(!radicand.is_zero(), "radicand must be nonzero");
        QuadExtElem {
            base,
            radical_coeff,
            radicand,
        }
    }

    pub fn rational(x: Rational, radicand: &Rational) -> Self {
        Self::new(x, Rational::zero(), radicand.clone())
    }

    pub fn zero(radicand: &Rational) -> Self {
        Self::rational(Rational::zero(), radicand)
    }

    pub fn one(radicand: &Rational) -> Self {
        Self::rational(Rational::one(), radicand)
    }

    /// The generator `√radicand`.
    pub fn sqrt_radicand(radicand: &Rational) -> Self {
        Self::new(Rational::zero(), Rational::one(), radicand.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.radical_coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radical_coeff.is_zero()
    }

    /// `base² − radical_coeff²·radicand`
    pub fn norm(&self) -> Rational {
        &self.base * &self.base - &(&self.radical_coeff * &self.radical_coeff) * &self.radicand
    }

    pub fn conjugate(&self) -> Self {
        Self::new(
            self.base.clone(),
            -&self.radical_coeff,
            self.radicand.clone(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            &self.base * c,
            &self.radical_coeff * c,
            self.radicand.clone(),
        )
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        let inv = n.checked_recip().ok_or(ExactError::NotInvertible)?;
        Ok(self.conjugate().scale(&inv))
    }

    /// A square root inside the same extension, if one exists among
    /// `λ` and `λ·√radicand` with `λ` rational.
    pub fn sqrt(&self) -> Option<Self> {
        if !self.is_rational() {
            return None;
        }
        if let Some(r) = self.base.sqrt_exact() {
            return Some(Self::rational(r, &self.radicand));
        }
        let ratio = &self.base / &self.radicand;
        ratio
            .sqrt_exact()
            .map(|mu| Self::new(Rational::zero(), mu, self.radicand.clone()))
    }

    fn check(&self, other: &Self) {
        assert!(
            self.radicand == other.radicand,
            "quadratic extensions differ"
        );
    }
}

impl Add for &QuadExtElem {
    type Output = QuadExtElem;
    fn add(self, rhs: &QuadExtElem) -> QuadExtElem {
        self.check(rhs);
        QuadExtElem::new(
            &self.base + &rhs.base,
            &self.radical_coeff + &rhs.radical_coeff,
            self.radicand.clone(),
        )
    }
}

impl Sub for &QuadExtElem {
    type Output = QuadExtElem;
    fn sub(self, rhs: &QuadExtElem) -> QuadExtElem {
        self + &(-rhs)
    }
}

impl Mul for &QuadExtElem {
    type Output = QuadExtElem;
    fn mul(self, rhs: &QuadExtElem) -> QuadExtElem {
        self.check(rhs);
        let base =
            &self.base * &rhs.base + &(&self.radical_coeff * &rhs.radical_coeff) * &self.radicand;
        let rad = &self.base * &rhs.radical_coeff + &self.radical_coeff * &rhs.base;
        QuadExtElem::new(base, rad, self.radicand.clone())
    }
}

impl Neg for &QuadExtElem {
    type Output = QuadExtElem;
    fn neg(self) -> QuadExtElem {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical_coeff.is_zero() {
            write!(f, "{}", self.base)
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                self.base, self.radical_coeff, self.radicand
            )
        }
    }
}

impl fmt::Debug for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    #[test]
    fn arithmetic_respects_relation() {
        let r = q(3, 1);
        let s = QuadExtElem::sqrt_radicand(&r);
        assert_eq!(&s * &s, QuadExtElem::rational(q(3, 1), &r));
        let x = QuadExtElem::new(q(1, 2), q(-2, 3), r.clone());
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, QuadExtElem::one(&r));
    }

    #[test]
    fn square_radicand_degenerates_uniformly() {
        let r = q(4, 1);
        let s = QuadExtElem::sqrt_radicand(&r);
        // (√4 − 2)(√4 + 2) = 0 although neither factor is the zero element
        let a = &s - &QuadExtElem::rational(q(2, 1), &r);
        let b = &s + &QuadExtElem::rational(q(2, 1), &r);
        assert!((&a * &b).is_zero());
        assert!(a.inverse().is_err());
        assert_eq!(s.inverse().unwrap().scale(&q(4, 1)), s);
    }

    #[test]
    fn sqrt_in_extension() {
        let r = q(5, 1);
        let five = QuadExtElem::rational(q(20, 1), &r);
        let root = five.sqrt().unwrap();
        assert_eq!(root, QuadExtElem::new(q(0, 1), q(2, 1), r.clone()));
        assert!(QuadExtElem::rational(q(3, 1), &r).sqrt().is_none());
        assert_eq!(
            QuadExtElem::rational(q(9, 4), &r).sqrt().unwrap().base,
            q(3, 2)
        );
    }
}
