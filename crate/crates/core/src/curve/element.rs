use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{Rational, UniPoly};

use super::model::{CurveModel, Parity};
use super::CurveError;

/// Normal-form element `(alpha + beta·w) / L^m` of the coordinate ring of a
/// [`CurveModel`], localized at `L` in the odd case.
///
/// Elements carry no reference to their model; every operation goes through
/// the model, which owns `L`, `R` and the reduction rules. For the even family
/// `m` is always zero. For the odd family `m` is minimal, i.e. `alpha` and
/// `beta` are not both divisible by `L` when `m > 0`, which makes the
/// representation unique and `==` structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveElement {
    pub alpha: UniPoly,
    pub beta: UniPoly,
    pub denom_power: u32,
}

impl CurveElement {
    pub fn zero() -> Self {
        CurveElement {
            alpha: UniPoly::zero(),
            beta: UniPoly::zero(),
            denom_power: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// A polynomial in `t` alone.
    pub fn from_poly(p: UniPoly) -> Self {
        CurveElement {
            alpha: p,
            beta: UniPoly::zero(),
            denom_power: 0,
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }
}

impl fmt::Display for CurveElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*w", self.alpha, self.beta)?;
        if self.denom_power > 0 {
            write!(f, " / L^{}", self.denom_power)?;
        }
        Ok(())
    }
}

impl CurveModel {
    pub fn t(&self) -> CurveElement {
        CurveElement::from_poly(UniPoly::from_ints(&[0, 1]))
    }

    pub fn w(&self) -> CurveElement {
        CurveElement {
            alpha: UniPoly::zero(),
            beta: UniPoly::one(),
            denom_power: 0,
        }
    }

    /// `z = L·x = w + Q/2`; equal to `x` for the even family.
    pub fn z(&self) -> CurveElement {
        CurveElement {
            alpha: self.half_q().clone(),
            beta: UniPoly::one(),
            denom_power: 0,
        }
    }

    /// `x = (w + Q/2) / L`.
    pub fn x(&self) -> CurveElement {
        let z = self.z();
        match self.parity() {
            Parity::Even => z,
            Parity::Odd => self.normalize(CurveElement {
                denom_power: 1,
                ..z
            }),
        }
    }

    /// Cancel common factors of `L` from numerator and denominator.
    pub fn normalize(&self, mut e: CurveElement) -> CurveElement {
        if e.is_zero() {
            e.denom_power = 0;
            return e;
        }
        if self.parity() == Parity::Even {
            return e;
        }
        let root = self.l_root();
        while e.denom_power > 0 {
            let (qa, ra) = e.alpha.div_linear(&root);
            let (qb, rb) = e.beta.div_linear(&root);
            if !ra.is_zero() || !rb.is_zero() {
                break;
            }
            e.alpha = qa;
            e.beta = qb;
            e.denom_power -= 1;
        }
        e
    }

    fn lift(&self, e: &CurveElement, m: u32) -> (UniPoly, UniPoly) {
        let extra = m - e.denom_power;
        if extra == 0 {
            return (e.alpha.clone(), e.beta.clone());
        }
        let f = self.l().pow(extra);
        (&e.alpha * &f, &e.beta * &f)
    }

    pub fn add(&self, a: &CurveElement, b: &CurveElement) -> CurveElement {
        let m = a.denom_power.max(b.denom_power);
        let (a0, a1) = self.lift(a, m);
        let (b0, b1) = self.lift(b, m);
        self.normalize(CurveElement {
            alpha: &a0 + &b0,
            beta: &a1 + &b1,
            denom_power: m,
        })
    }

    pub fn neg(&self, a: &CurveElement) -> CurveElement {
        CurveElement {
            alpha: -&a.alpha,
            beta: -&a.beta,
            denom_power: a.denom_power,
        }
    }

    pub fn sub(&self, a: &CurveElement, b: &CurveElement) -> CurveElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &CurveElement, c: &Rational) -> CurveElement {
        if c.is_zero() {
            return CurveElement::zero();
        }
        CurveElement {
            alpha: a.alpha.scale(c),
            beta: a.beta.scale(c),
            denom_power: a.denom_power,
        }
    }

    pub fn mul(&self, a: &CurveElement, b: &CurveElement) -> CurveElement {
        let alpha = &(&a.alpha * &b.alpha) + &(&(&a.beta * &b.beta) * self.r());
        let beta = &(&a.alpha * &b.beta) + &(&a.beta * &b.alpha);
        self.normalize(CurveElement {
            alpha,
            beta,
            denom_power: a.denom_power + b.denom_power,
        })
    }

    pub fn pow(&self, a: &CurveElement, e: u32) -> CurveElement {
        (0..e).fold(CurveElement::constant(Rational::one()), |acc, _| {
            self.mul(&acc, a)
        })
    }

    /// The curve derivation, determined by `𝒟(t) = 2w` and `𝒟(w) = R′`.
    pub fn derive(&self, e: &CurveElement) -> CurveElement {
        let (a, b, m) = (&e.alpha, &e.beta, e.denom_power);
        let two = Rational::from_int(2);
        // numerator derivative: (2R·B′ + B·R′) + 2A′·w
        let d0 = &(self.r() * &b.derivative()).scale(&two) + &(b * self.r_prime());
        let d1 = a.derivative().scale(&two);
        if m == 0 {
            return self.normalize(CurveElement {
                alpha: d0,
                beta: d1,
                denom_power: 0,
            });
        }
        // quotient rule against L^m, using 𝒟(L) = 2w·L′ with L′ = 1
        let l = self.l();
        let mm = Rational::from_int(2 * m as i64);
        let alpha = &(&d0 * l) - &(b * self.r()).scale(&mm);
        let beta = &(&d1 * l) - &a.scale(&mm);
        self.normalize(CurveElement {
            alpha,
            beta,
            denom_power: m + 1,
        })
    }

    /// `(α, β)` with `e = α(t) + β(t)·x`; fails when either part has a pole at `L = 0`.
    pub fn to_x_repr(&self, e: &CurveElement) -> Result<(UniPoly, UniPoly), CurveError> {
        let a = &e.alpha - &(&e.beta * self.half_q());
        match self.parity() {
            Parity::Even => Ok((a, e.beta.clone())),
            Parity::Odd => {
                let m = e.denom_power;
                let beta = if m == 0 {
                    &e.beta * self.l()
                } else {
                    self.div_l_power(&e.beta, m - 1, "x-coefficient")?
                };
                let alpha = self.div_l_power(&a, m, "constant part")?;
                Ok((alpha, beta))
            }
        }
    }

    fn div_l_power(&self, p: &UniPoly, m: u32, what: &str) -> Result<UniPoly, CurveError> {
        let root = self.l_root();
        let mut cur = p.clone();
        for i in 0..m {
            let (q, r) = cur.div_linear(&root);
            if !r.is_zero() {
                return Err(CurveError::NotInSpace {
                    excess: format!("{what} {p} has a pole of order {} at t = {root}", m - i),
                });
            }
            cur = q;
        }
        Ok(cur)
    }

    /// Build from the x-representation `α + β·x`.
    pub fn from_x_repr(&self, alpha: &UniPoly, beta: &UniPoly) -> CurveElement {
        let a = CurveElement::from_poly(alpha.clone());
        let b = self.mul(&CurveElement::from_poly(beta.clone()), &self.x());
        self.add(&a, &b)
    }

    /// If `e` is a unit `λ·L^j`, return the inverse.
    fn unit_inverse(&self, e: &CurveElement) -> Result<CurveElement, CurveError> {
        let fail = || CurveError::DivisionByNonUnit(e.to_string());
        if !e.beta.is_zero() || e.alpha.is_zero() {
            return Err(fail());
        }
        let mut a = e.alpha.clone();
        let mut j = 0u32;
        if self.parity() == Parity::Odd {
            let root = self.l_root();
            loop {
                let (q, r) = a.div_linear(&root);
                if !r.is_zero() || q.is_zero() {
                    break;
                }
                a = q;
                j += 1;
            }
        }
        if a.degree() != Some(0) {
            return Err(fail());
        }
        let lam_inv = a.leading().recip();
        let num = self.l().pow(e.denom_power).scale(&lam_inv);
        Ok(self.normalize(CurveElement {
            alpha: num,
            beta: UniPoly::zero(),
            denom_power: j,
        }))
    }

    pub fn reduce(&self, expr: &RawExpr) -> Result<CurveElement, CurveError> {
        Ok(match expr {
            RawExpr::T => self.t(),
            RawExpr::X => self.x(),
            RawExpr::Z => self.z(),
            RawExpr::W => self.w(),
            RawExpr::Const(c) => CurveElement::constant(c.clone()),
            RawExpr::Poly(p) => CurveElement::from_poly(p.clone()),
            RawExpr::Add(a, b) => self.add(&self.reduce(a)?, &self.reduce(b)?),
            RawExpr::Sub(a, b) => self.sub(&self.reduce(a)?, &self.reduce(b)?),
            RawExpr::Mul(a, b) => self.mul(&self.reduce(a)?, &self.reduce(b)?),
            RawExpr::Neg(a) => self.neg(&self.reduce(a)?),
            RawExpr::Pow(a, e) => self.pow(&self.reduce(a)?, *e),
            RawExpr::Div(a, b) => {
                let inv = self.unit_inverse(&self.reduce(b)?)?;
                self.mul(&self.reduce(a)?, &inv)
            }
        })
    }
}

/// Unreduced ring expression in the generators `t`, `x` (and the derived
/// `z = L·x`, `w = z − Q/2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawExpr {
    T,
    X,
    Z,
    W,
    Const(Rational),
    Poly(UniPoly),
    Add(Box<RawExpr>, Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Mul(Box<RawExpr>, Box<RawExpr>),
    Neg(Box<RawExpr>),
    Pow(Box<RawExpr>, u32),
    Div(Box<RawExpr>, Box<RawExpr>),
}

impl RawExpr {
    pub fn int(n: i64) -> Self {
        RawExpr::Const(Rational::from_int(n))
    }

    pub fn pow(self, e: u32) -> Self {
        RawExpr::Pow(Box::new(self), e)
    }
}

impl std::ops::Add for RawExpr {
    type Output = RawExpr;
    fn add(self, rhs: RawExpr) -> RawExpr {
        RawExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for RawExpr {
    type Output = RawExpr;
    fn sub(self, rhs: RawExpr) -> RawExpr {
        RawExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for RawExpr {
    type Output = RawExpr;
    fn mul(self, rhs: RawExpr) -> RawExpr {
        RawExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Div for RawExpr {
    type Output = RawExpr;
    fn div(self, rhs: RawExpr) -> RawExpr {
        RawExpr::Div(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for RawExpr {
    type Output = RawExpr;
    fn neg(self) -> RawExpr {
        RawExpr::Neg(Box::new(self))
    }
}
