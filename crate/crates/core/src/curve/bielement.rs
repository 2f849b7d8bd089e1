use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactError, Poly, Rational, UniPoly, Vars};

use super::element::CurveElement;
use super::model::{CurveModel, Parity};
use super::CurveError;

/// The shared `(t1, t2)` variable context.
pub fn bivars() -> Vars {
    static V: OnceLock<Vars> = OnceLock::new();
    V.get_or_init(|| Vars::new(&["t1", "t2"])).clone()
}

/// Element `(c00 + c10·w1 + c01·w2 + c11·w1·w2) / (L1^m1 · L2^m2)` of the
/// coordinate ring of `C × C` (localized at `L` in each factor).
///
/// The coefficients are stored as `[c00, c10, c01, c11]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiCurveElement {
    pub coeffs: [Poly; 4],
    pub denom_powers: (u32, u32),
}

impl BiCurveElement {
    pub fn zero() -> Self {
        let z = Poly::zero(bivars());
        BiCurveElement {
            coeffs: [z.clone(), z.clone(), z.clone(), z],
            denom_powers: (0, 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }
}

/// Per-model data lifted to two points, reused across many products.
pub struct BiRing<'a> {
    model: &'a CurveModel,
    r: [Poly; 2],
    l: [Poly; 2],
    h: [Poly; 2],
    t2: Poly,
}

impl<'a> BiRing<'a> {
    pub fn new(model: &'a CurveModel) -> Self {
        let v = bivars();
        let lift = |u: &UniPoly| {
            [
                Poly::from_uni(v.clone(), 0, u),
                Poly::from_uni(v.clone(), 1, u),
            ]
        };
        BiRing {
            model,
            r: lift(model.r()),
            l: lift(model.l()),
            h: lift(model.half_q()),
            t2: Poly::var(v.clone(), 1),
        }
    }

    pub fn model(&self) -> &CurveModel {
        self.model
    }

    /// `s1(point 1) · s2(point 2)`.
    pub fn tensor(&self, s1: &CurveElement, s2: &CurveElement) -> BiCurveElement {
        let v = bivars();
        let a1 = Poly::from_uni(v.clone(), 0, &s1.alpha);
        let b1 = Poly::from_uni(v.clone(), 0, &s1.beta);
        let a2 = Poly::from_uni(v.clone(), 1, &s2.alpha);
        let b2 = Poly::from_uni(v, 1, &s2.beta);
        BiCurveElement {
            coeffs: [&a1 * &a2, &b1 * &a2, &a1 * &b2, &b1 * &b2],
            denom_powers: (s1.denom_power, s2.denom_power),
        }
    }

    fn lift(&self, e: &BiCurveElement, m: (u32, u32)) -> [Poly; 4] {
        let (d1, d2) = (m.0 - e.denom_powers.0, m.1 - e.denom_powers.1);
        if d1 == 0 && d2 == 0 {
            return e.coeffs.clone();
        }
        let f = &self.l[0].pow(d1) * &self.l[1].pow(d2);
        e.coeffs.clone().map(|c| &c * &f)
    }

    pub fn add(&self, a: &BiCurveElement, b: &BiCurveElement) -> BiCurveElement {
        self.combine(a, b, &Rational::one())
    }

    pub fn sub(&self, a: &BiCurveElement, b: &BiCurveElement) -> BiCurveElement {
        self.combine(a, b, &-Rational::one())
    }

    /// `a + s·b`.
    pub fn combine(&self, a: &BiCurveElement, b: &BiCurveElement, s: &Rational) -> BiCurveElement {
        let m = (
            a.denom_powers.0.max(b.denom_powers.0),
            a.denom_powers.1.max(b.denom_powers.1),
        );
        let mut ca = self.lift(a, m);
        let cb = self.lift(b, m);
        for (x, y) in ca.iter_mut().zip(cb.iter()) {
            x.add_scaled(y, s);
        }
        self.normalize(BiCurveElement {
            coeffs: ca,
            denom_powers: m,
        })
    }

    pub fn scale(&self, a: &BiCurveElement, s: &Rational) -> BiCurveElement {
        if s.is_zero() {
            return BiCurveElement::zero();
        }
        BiCurveElement {
            coeffs: a.coeffs.clone().map(|c| c.scale(s)),
            denom_powers: a.denom_powers,
        }
    }

    pub fn mul(&self, a: &BiCurveElement, b: &BiCurveElement) -> BiCurveElement {
        let [a00, a10, a01, a11] = &a.coeffs;
        let [b00, b10, b01, b11] = &b.coeffs;
        let [r1, r2] = &self.r;
        let v = bivars();
        let mut c00 = a00 * b00;
        c00.add_product(&(r1 * a10), b10);
        c00.add_product(&(r2 * a01), b01);
        c00.add_product(&(&(r1 * r2) * a11), b11);
        let mut t = a01 * b11;
        t.add_product(a11, b01);
        let mut c10 = a00 * b10;
        c10.add_product(a10, b00);
        c10.add_product(r2, &t);
        let mut t = a10 * b11;
        t.add_product(a11, b10);
        let mut c01 = a00 * b01;
        c01.add_product(a01, b00);
        c01.add_product(r1, &t);
        let mut c11 = Poly::zero(v);
        c11.add_product(a00, b11);
        c11.add_product(a11, b00);
        c11.add_product(a10, b01);
        c11.add_product(a01, b10);
        self.normalize(BiCurveElement {
            coeffs: [c00, c10, c01, c11],
            denom_powers: (
                a.denom_powers.0 + b.denom_powers.0,
                a.denom_powers.1 + b.denom_powers.1,
            ),
        })
    }

    /// Cancel common powers of `L1`, `L2`.
    pub fn normalize(&self, mut e: BiCurveElement) -> BiCurveElement {
        if e.is_zero() {
            e.denom_powers = (0, 0);
            return e;
        }
        if self.model.parity() == Parity::Even {
            return e;
        }
        let root = Poly::constant(bivars(), self.model.l_root());
        for slot in 0..2 {
            loop {
                let m = if slot == 0 {
                    &mut e.denom_powers.0
                } else {
                    &mut e.denom_powers.1
                };
                if *m == 0 {
                    break;
                }
                let parts: Vec<(Poly, Poly)> = e
                    .coeffs
                    .iter()
                    .map(|c| c.div_var_minus(slot, &root))
                    .collect();
                if parts.iter().any(|(_, r)| !r.is_zero()) {
                    break;
                }
                *m -= 1;
                for (c, (q, _)) in e.coeffs.iter_mut().zip(parts) {
                    *c = q;
                }
            }
        }
        e
    }

    /// Exact division of every coefficient by `t1 − t2`.
    pub fn div_diagonal(&self, e: &BiCurveElement) -> Result<BiCurveElement, CurveError> {
        let mut out = e.clone();
        for c in out.coeffs.iter_mut() {
            let (q, r) = c.div_var_minus(0, &self.t2);
            if !r.is_zero() {
                return Err(ExactError::NonzeroRemainder {
                    divisor: "t1 - t2".into(),
                    remainder: r.to_string(),
                }
                .into());
            }
            *c = q;
        }
        Ok(out)
    }

    /// Restriction to the diagonal `t1 = t2 = t`, `w1 = w2 = w`.
    pub fn restrict_diagonal(&self, e: &BiCurveElement) -> CurveElement {
        let to_uni = |p: &Poly| {
            let mut coeffs = Vec::new();
            for (m, c) in p.terms() {
                let d = (m.exps()[0] + m.exps()[1]) as usize;
                if coeffs.len() <= d {
                    coeffs.resize(d + 1, Rational::zero());
                }
                coeffs[d] += c.clone();
            }
            UniPoly::from_coeffs(coeffs)
        };
        let [c00, c10, c01, c11] = &e.coeffs;
        let m = self.model;
        let alpha = &to_uni(c00) + &(&to_uni(c11) * m.r());
        let beta = &to_uni(c10) + &to_uni(c01);
        m.normalize(CurveElement {
            alpha,
            beta,
            denom_power: e.denom_powers.0 + e.denom_powers.1,
        })
    }

    /// Rewrite in the `x`-basis: returns `[d00, d10, d01, d11]` with
    /// `e = d00 + d10·x1 + d01·x2 + d11·x1·x2`, each a polynomial. Fails if a
    /// pole along `L1 = 0` or `L2 = 0` survives.
    pub fn to_x_basis(&self, e: &BiCurveElement) -> Result<[Poly; 4], CurveError> {
        let [c00, c10, c01, c11] = &e.coeffs;
        let [h1, h2] = &self.h;
        let [l1, l2] = &self.l;
        let mut d00 = c00.clone();
        d00.add_product(&-c10, h1);
        d00.add_product(&-c01, h2);
        d00.add_product(&(c11 * h1), h2);
        let d10 = &(c10 - &(c11 * h2)) * l1;
        let d01 = &(c01 - &(c11 * h1)) * l2;
        let d11 = &(c11 * l1) * l2;
        let mut out = [d00, d10, d01, d11];
        if self.model.parity() == Parity::Odd {
            let root = Poly::constant(bivars(), self.model.l_root());
            for (slot, m) in [(0usize, e.denom_powers.0), (1, e.denom_powers.1)] {
                for _ in 0..m {
                    for d in out.iter_mut() {
                        let (q, r) = d.div_var_minus(slot, &root);
                        if !r.is_zero() {
                            return Err(CurveError::NotInSpace {
                                excess: format!("pole along L{} = 0: remainder {r}", slot + 1),
                            });
                        }
                        *d = q;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// How to read the numerator of the odd-family kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelReading {
    /// `w1 + w2`, i.e. `(t1+c)x1 − Q1/2 + (t2+c)x2 − Q2/2`.
    #[default]
    Symmetric,
    /// `(t1+c)x1 − Q1/2 + (t1+c)x2 − Q2/2`, taken verbatim.
    Literal,
}

/// The algebraic Szegő kernel `S = numerator / (t1 − t2)`. Only the numerator
/// is stored; the diagonal denominator is implicit and never divided out on
/// its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SzegoKernel {
    pub numerator: BiCurveElement,
    pub reading: KernelReading,
}

impl SzegoKernel {
    pub fn new(model: &CurveModel) -> Self {
        Self::with_reading(model, KernelReading::Symmetric)
    }

    pub fn with_reading(model: &CurveModel, reading: KernelReading) -> Self {
        let ring = BiRing::new(model);
        let w = model.w();
        let one = CurveElement::constant(Rational::one());
        let sym = ring.add(&ring.tensor(&w, &one), &ring.tensor(&one, &w));
        let numerator = match (reading, model.parity()) {
            (KernelReading::Literal, Parity::Odd) => {
                // w1 + L1·x2 − Q2/2
                let x2 = ring.tensor(&one, &model.x());
                let l1 = ring.tensor(&CurveElement::from_poly(model.l().clone()), &one);
                let h2 = ring.tensor(&one, &CurveElement::from_poly(model.half_q().clone()));
                let w1 = ring.tensor(&w, &one);
                ring.sub(&ring.add(&w1, &ring.mul(&l1, &x2)), &h2)
            }
            _ => sym,
        };
        SzegoKernel { numerator, reading }
    }
}

/// `S · (s1 ⊗ s2 − s2 ⊗ s1)`, with the diagonal pole cancelled exactly.
pub fn mult_kernel_antisym(
    ring: &BiRing<'_>,
    kernel: &SzegoKernel,
    s1: &CurveElement,
    s2: &CurveElement,
) -> Result<BiCurveElement, CurveError> {
    let wedge = ring.sub(&ring.tensor(s1, s2), &ring.tensor(s2, s1));
    let num = ring.mul(&kernel.numerator, &wedge);
    ring.div_diagonal(&num)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::RawExpr;
    use crate::exact::q;
    use proptest::prelude::*;

    fn even_a0() -> CurveModel {
        CurveModel::even_a0(2, q(3, 1))
    }

    fn generic_even() -> CurveModel {
        CurveModel::even(
            3,
            UniPoly::from_ints(&[1, -2, 3]),
            UniPoly::from_ints(&[2, 0, -1, 5, 7]),
        )
        .unwrap()
    }

    fn generic_odd() -> CurveModel {
        CurveModel::odd(
            2,
            q(3, 2),
            UniPoly::from_ints(&[-1, 1, 2]),
            UniPoly::from_ints(&[4, 1, 0, -3]),
        )
        .unwrap()
    }

    fn x_basis_single(ring: &BiRing<'_>, e: &BiCurveElement) -> [Poly; 4] {
        ring.to_x_basis(e).unwrap()
    }

    #[test]
    fn kernel_numerators() {
        let m = even_a0();
        let ring = BiRing::new(&m);
        let k = SzegoKernel::new(&m);
        // x1 + x2
        let d = x_basis_single(&ring, &k.numerator);
        let v = bivars();
        assert!(d[0].is_zero() && d[3].is_zero());
        assert_eq!(d[1], Poly::one(v.clone()));
        assert_eq!(d[2], Poly::one(v.clone()));

        let m =
            CurveModel::even(2, UniPoly::from_ints(&[0, 2]), UniPoly::from_ints(&[1, 1])).unwrap();
        let ring = BiRing::new(&m);
        let d = x_basis_single(&ring, &SzegoKernel::new(&m).numerator);
        // x1 − t1 + x2 − t2
        let t = |i| Poly::var(v.clone(), i);
        assert_eq!(d[0], -(&t(0) + &t(1)));
        assert_eq!(d[1], Poly::one(v.clone()));

        // odd: z_i − Q(t_i)/2 with z = (t+c)x
        let o = generic_odd();
        let ring = BiRing::new(&o);
        let d = x_basis_single(&ring, &SzegoKernel::new(&o).numerator);
        let h = |i| Poly::from_uni(v.clone(), i, o.half_q());
        let l = |i| Poly::from_uni(v.clone(), i, o.l());
        assert_eq!(d[0], -(&h(0) + &h(1)));
        assert_eq!(d[1], l(0));
        assert_eq!(d[2], l(1));
        assert!(d[3].is_zero());
    }

    #[test]
    fn antisym_examples() {
        let m = even_a0();
        let ring = BiRing::new(&m);
        let k = SzegoKernel::new(&m);
        let one = CurveElement::constant(q(1, 1));
        let r = mult_kernel_antisym(&ring, &k, &m.t(), &m.t()).unwrap();
        assert!(r.is_zero());
        // s1 = 1, s2 = t → −w1 − w2
        let r = mult_kernel_antisym(&ring, &k, &one, &m.t()).unwrap();
        assert_eq!(r, ring.scale(&k.numerator, &q(-1, 1)));
        // multiply back by (t1 − t2)
        let diag = BiCurveElement {
            coeffs: [
                &Poly::var(bivars(), 0) - &Poly::var(bivars(), 1),
                Poly::zero(bivars()),
                Poly::zero(bivars()),
                Poly::zero(bivars()),
            ],
            denom_powers: (0, 0),
        };
        let wedge = ring.sub(&ring.tensor(&one, &m.t()), &ring.tensor(&m.t(), &one));
        assert_eq!(ring.mul(&r, &diag), ring.mul(&k.numerator, &wedge));
        // s1 = 1, s2 = x → (x2² − x1²)/(t1 − t2) = 0 on x² = a₀
        assert!(mult_kernel_antisym(&ring, &k, &one, &m.x())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn diagonal_restriction_of_numerator() {
        for m in [generic_even(), generic_odd()] {
            let ring = BiRing::new(&m);
            for reading in [KernelReading::Symmetric, KernelReading::Literal] {
                let k = SzegoKernel::with_reading(&m, reading);
                assert_eq!(
                    ring.restrict_diagonal(&k.numerator),
                    m.scale(&m.w(), &q(2, 1))
                );
            }
        }
    }

    fn small_expr() -> impl Strategy<Value = RawExpr> {
        let coef = -3i64..=3;
        (
            proptest::collection::vec(coef.clone(), 4),
            proptest::collection::vec(coef, 3),
        )
            .prop_map(|(a, b)| {
                RawExpr::Poly(UniPoly::from_ints(&a))
                    + RawExpr::Poly(UniPoly::from_ints(&b)) * RawExpr::X
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn bilinear_and_antisymmetric(a in small_expr(), b in small_expr(), c in small_expr(), s in -5i64..5, odd in any::<bool>()) {
            let m = if odd { generic_odd() } else { generic_even() };
            let ring = BiRing::new(&m);
            let k = SzegoKernel::new(&m);
            let (ea, eb, ec) = (m.reduce(&a).unwrap(), m.reduce(&b).unwrap(), m.reduce(&c).unwrap());
            let ab = mult_kernel_antisym(&ring, &k, &ea, &eb).unwrap();
            let ba = mult_kernel_antisym(&ring, &k, &eb, &ea).unwrap();
            prop_assert!(ring.add(&ab, &ba).is_zero());
            let lin = m.add(&ea, &m.scale(&ec, &q(s, 1)));
            let lhs = mult_kernel_antisym(&ring, &k, &lin, &eb).unwrap();
            let cb = mult_kernel_antisym(&ring, &k, &ec, &eb).unwrap();
            prop_assert_eq!(lhs, ring.combine(&ab, &cb, &q(s, 1)));
        }
    }
}
