//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded-lex
//! order, so iteration order (and everything serialized from it) is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::rational::Rational;
use super::unipoly::UniPoly;
use super::ExactError;

/// An ordered list of variable names shared between polynomials.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `prefix0, prefix1, ...`
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Vars((0..n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic: fails when the operands live in different contexts.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly, ExactError> {
    a.check_context(b)?;
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

/// Formal partial derivative with respect to a named variable.
pub fn poly_derivative(p: &Poly, var: &str) -> Result<Poly, ExactError> {
    let i = p.var_index(var)?;
    Ok(p.derivative(i))
}

/// The exact quotient `p / (var1 − var2)`.
///
/// Fails with [`ExactError::NonzeroRemainder`] when `p` does not vanish on the
/// diagonal `var1 = var2`.
pub fn exact_div_linear(p: &Poly, var1: &str, var2: &str) -> Result<Poly, ExactError> {
    let i = p.var_index(var1)?;
    let j = p.var_index(var2)?;
    let root = Poly::var(p.vars.clone(), j);
    let (quot, rem) = p.div_var_minus(i, &root);
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(ExactError::NonzeroRemainder {
            divisor: format!("{var1} - {var2}"),
            remainder: rem.to_string(),
        })
    }
}

impl Poly {
    pub fn zero(vars: Vars) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        let n = p.nvars();
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: Vars, i: usize) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        p.add_term(Monomial::var(n, i), Rational::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(vars: Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), p.nvars(), "exponent vector length mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// Embed a univariate polynomial as a polynomial in variable `i`.
    pub fn from_uni(vars: Vars, i: usize, u: &UniPoly) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        for (e, c) in u.coeffs().iter().enumerate() {
            let mut m = Monomial::one(n);
            m.0[i] = e as u16;
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, ExactError> {
        self.vars
            .index_of(name)
            .ok_or_else(|| ExactError::UnknownVariable(name.to_string()))
    }

    pub fn check_context(&self, other: &Poly) -> Result<(), ExactError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(ExactError::ContextMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        debug_assert!(self.vars == other.vars);
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    /// `self += a · b`
    pub fn add_product(&mut self, a: &Poly, b: &Poly) {
        debug_assert!(self.vars == a.vars && a.vars == b.vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), ca * cb);
            }
        }
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * Rational::from_int(e as i64));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.vars.clone()), |acc, _| &acc * self)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    v *= x.pow(e as u32);
                }
            }
            acc += v;
        }
        acc
    }

    /// Substitute `var_i := value`, keeping the variable context.
    pub fn substitute(&self, i: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out.add_term(m2, c * value.pow(e as u32));
        }
        out
    }

    /// Substitute `var_i := p`.
    pub fn compose(&self, i: usize, p: &Poly) -> Poly {
        let mut out = Poly::zero(self.vars.clone());
        for (e, coeff) in self.split_by_var(i) {
            out = &out + &(&coeff * &p.pow(e as u32));
        }
        out
    }

    /// Rename into another context through an index map (`map[i]` is the
    /// target index of variable `i`).
    pub fn remap(&self, target: Vars, map: &[usize]) -> Poly {
        let n = target.len();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::one(n);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    m2.0[map[i]] += e;
                }
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Group by the exponent of variable `i`: `self = Σ_e coeff_e · var_i^e`,
    /// with each `coeff_e` free of `var_i`.
    pub fn split_by_var(&self, i: usize) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out.entry(e)
                .or_insert_with(|| Poly::zero(self.vars.clone()))
                .add_term(m2, c.clone());
        }
        out
    }

    /// Synthetic division by `(var_i − root)` where `root` does not involve
    /// `var_i`. Returns `(quotient, remainder)`, the remainder free of `var_i`.
    pub fn div_var_minus(&self, i: usize, root: &Poly) -> (Poly, Poly) {
        debug_assert!(root.degree_in(i).unwrap_or(0) == 0);
        let parts = self.split_by_var(i);
        let zero = Poly::zero(self.vars.clone());
        let Some(&top) = parts.keys().next_back() else {
            return (zero.clone(), zero);
        };
        let mut quot = zero.clone();
        let mut carry = zero.clone();
        for e in (0..=top).rev() {
            let mut v = parts.get(&e).cloned().unwrap_or_else(|| zero.clone());
            v.add_product(&carry, root);
            if e == 0 {
                return (quot, v);
            }
            // v is the coefficient of var_i^(e-1) in the quotient
            for (m, c) in &v.terms {
                let mut m2 = m.clone();
                m2.0[i] = e - 1;
                quot.add_term(m2, c.clone());
            }
            carry = v;
        }
        unreachable!()
    }

    /// Homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", names[i])?,
                    _ => write!(f, "*{}^{}", names[i], e)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.vars == rhs.vars, "variable context mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert!(self.vars == rhs.vars, "variable context mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.vars == rhs.vars, "variable context mismatch");
        let mut out = Poly::zero(self.vars.clone());
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u16>,
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars.names().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.0.to_vec(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(deserializer)?;
        let vars = Vars::new(&j.vars);
        let mut p = Poly::zero(vars);
        for t in j.terms {
            if t.exp.len() != p.nvars() {
                return Err(serde::de::Error::custom("exponent vector length mismatch"));
            }
            p.add_term(Monomial::from_exps(&t.exp), t.coeff);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;
    use proptest::prelude::*;

    fn ctx2() -> Vars {
        Vars::new(&["t1", "t2"])
    }

    fn mono(c: i64, e: &[u16]) -> (Monomial, Rational) {
        (Monomial::from_exps(e), Rational::from_int(c))
    }

    #[test]
    fn difference_of_squares() {
        let v = Vars::new(&["t"]);
        let t = Poly::var(v.clone(), 0);
        let one = Poly::one(v.clone());
        let prod = poly_arith(&(&t + &one), &(&t - &one), PolyOp::Mul).unwrap();
        assert_eq!(prod, Poly::from_terms(v, [mono(1, &[2]), mono(-1, &[0])]));
    }

    #[test]
    fn additive_identity() {
        let v = Vars::new(&["t"]);
        let a0 = Poly::constant(v.clone(), q(3, 7));
        let sum = poly_arith(&Poly::zero(v.clone()), &a0, PolyOp::Add).unwrap();
        assert_eq!(sum, a0);
    }

    #[test]
    fn product_against_expanded_monomials() {
        // (t1^2 t2 + t2) * t1, checked against a hand-expanded term list
        let v = ctx2();
        let a = Poly::from_terms(v.clone(), [mono(1, &[2, 1]), mono(1, &[0, 1])]);
        let b = Poly::var(v.clone(), 0);
        let mut expected = BTreeMap::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let m = ma.mul(mb);
                *expected.entry(m).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let got = poly_arith(&a, &b, PolyOp::Mul).unwrap();
        assert_eq!(got, Poly::from_terms(v.clone(), expected));
        assert_eq!(
            got,
            Poly::from_terms(v, [mono(1, &[3, 1]), mono(1, &[1, 1])])
        );
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = Poly::var(Vars::new(&["t"]), 0);
        let b = Poly::var(Vars::new(&["s"]), 0);
        assert!(matches!(
            poly_arith(&a, &b, PolyOp::Add),
            Err(ExactError::ContextMismatch { .. })
        ));
    }

    #[test]
    fn derivative_by_name() {
        let v = Vars::new(&["t"]);
        let t4 = Poly::var(v.clone(), 0).pow(4);
        assert_eq!(
            poly_derivative(&t4, "t").unwrap(),
            Poly::var(v.clone(), 0).pow(3).scale(&q(4, 1))
        );
        assert!(poly_derivative(&Poly::constant(v.clone(), q(5, 1)), "t")
            .unwrap()
            .is_zero());
        assert!(poly_derivative(&t4, "s").is_err());
    }

    #[test]
    fn exact_division_by_diagonal() {
        let v = ctx2();
        let t1 = Poly::var(v.clone(), 0);
        let t2 = Poly::var(v.clone(), 1);
        let p = &t1.pow(2) - &t2.pow(2);
        assert_eq!(exact_div_linear(&p, "t1", "t2").unwrap(), &t1 + &t2);

        let p = &(&t1.pow(3) * &t2) - &(&t1 * &t2.pow(3));
        let qt = exact_div_linear(&p, "t1", "t2").unwrap();
        assert_eq!(&qt * &(&t1 - &t2), p);
        assert_eq!(qt, &(&t1 * &t2) * &(&t1 + &t2));

        let bad = &(&t1 - &t2) + &Poly::one(v);
        assert!(matches!(
            exact_div_linear(&bad, "t1", "t2"),
            Err(ExactError::NonzeroRemainder { .. })
        ));
    }

    #[test]
    fn graded_lex_iteration_is_canonical() {
        let v = ctx2();
        let p = Poly::from_terms(
            v,
            [
                mono(1, &[0, 2]),
                mono(1, &[1, 0]),
                mono(1, &[2, 0]),
                mono(1, &[0, 0]),
            ],
        );
        let order: Vec<Vec<u16>> = p.terms().map(|(m, _)| m.exps().to_vec()).collect();
        assert_eq!(order, vec![vec![0, 0], vec![1, 0], vec![0, 2], vec![2, 0]]);
    }

    fn arb_poly(vars: Vars) -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u16..4, 0u16..4), -20i64..20, 1i64..6), 0..6).prop_map(move |ts| {
            Poly::from_terms(
                vars.clone(),
                ts.into_iter()
                    .map(|((a, b), n, d)| (Monomial::from_exps(&[a, b]), q(n, d))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(a in arb_poly(ctx2()), b in arb_poly(ctx2()), c in arb_poly(ctx2())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn diagonal_division_inverts_multiplication(p in arb_poly(ctx2())) {
            let v = ctx2();
            let d = &Poly::var(v.clone(), 0) - &Poly::var(v, 1);
            let prod = &p * &d;
            prop_assert_eq!(exact_div_linear(&prod, "t1", "t2").unwrap(), p);
        }
    }
}
