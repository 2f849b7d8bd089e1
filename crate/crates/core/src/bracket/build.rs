use rayon::prelude::*;

use crate::curve::{
    mult_kernel_antisym, BiCurveElement, BiRing, CurveElement, CurveError, CurveModel,
    KernelReading, Parity, SectionSpace, SzegoKernel,
};
use crate::exact::Rational;

use super::tensor::{BracketTensor, Provenance, QuadForm};
use super::BracketError;

/// Sign applied to the raw kernel expression so that the even chart formula
/// comes out exactly as stated for the `x² = a₀` curves.
pub const DEFAULT_SIGN: i8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub reading: KernelReading,
    /// Multiply the result by `-1` on top of [`DEFAULT_SIGN`].
    pub sign_flip: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            reading: KernelReading::Symmetric,
            sign_flip: false,
        }
    }
}

impl BuildOptions {
    pub fn sign(&self) -> i8 {
        if self.sign_flip {
            -DEFAULT_SIGN
        } else {
            DEFAULT_SIGN
        }
    }
}

/// The correction operators `A`, `B`, given by their values on the section basis.
#[derive(Debug, Clone)]
pub struct CorrectionOperators {
    pub a: Vec<CurveElement>,
    pub b: Vec<CurveElement>,
    /// Free-form description of the pole budget the images are allowed.
    pub e_divisor: String,
}

impl CorrectionOperators {
    pub fn zero(space: &SectionSpace) -> Self {
        let z = vec![CurveElement::zero(); space.dim()];
        CorrectionOperators {
            a: z.clone(),
            b: z,
            e_divisor: "0".into(),
        }
    }

    /// `A = B = s·𝒟`.
    pub fn derivation(space: &SectionSpace, s: &Rational) -> Self {
        let m = space.model();
        let imgs: Vec<CurveElement> = space
            .basis()
            .iter()
            .map(|e| m.scale(&m.derive(e), s))
            .collect();
        CorrectionOperators {
            a: imgs.clone(),
            b: imgs,
            e_divisor: "D".into(),
        }
    }

    /// `A = B = s·(𝒟 + f)`, with `f` acting by multiplication.
    pub fn twisted_derivation(space: &SectionSpace, f: &CurveElement, s: &Rational) -> Self {
        let m = space.model();
        let imgs: Vec<CurveElement> = space
            .basis()
            .iter()
            .map(|e| m.scale(&m.add(&m.derive(e), &m.mul(f, e)), s))
            .collect();
        CorrectionOperators {
            a: imgs.clone(),
            b: imgs,
            e_divisor: "D + q".into(),
        }
    }

    /// Operators used by [`build_tensor`]: the plain derivation for even
    /// curves, and `𝒟 + x − (Q₂/2)·t` for odd ones, whose images may have a
    /// double pole at the point `x = ∞` over `t = −c`.
    pub fn standard(space: &SectionSpace) -> Self {
        let m = space.model();
        match m.parity() {
            Parity::Even => Self::derivation(space, &Rational::one()),
            Parity::Odd => Self::twisted_derivation(space, &odd_twist(m), &Rational::one()),
        }
    }
}

impl CorrectionOperators {
    /// The literal odd kernel is the symmetric one plus `x₂`, which contributes
    /// `scale·(s₁⊗x·s₂ − s₂⊗x·s₁)`; shifting `A` by `−scale·x` absorbs it.
    pub fn absorb_literal_reading(mut self, space: &SectionSpace, scale: &Rational) -> Self {
        let m = space.model();
        let x = m.scale(&m.x(), scale);
        for (a, e) in self.a.iter_mut().zip(space.basis()) {
            *a = m.sub(a, &m.mul(&x, e));
        }
        self
    }
}

/// `x − (Q₂/2)·t`. Multiplication operators only change the lift by terms that
/// vanish on `⟨φ⟩⊥`, and this one cancels the excess of the plain derivation.
pub fn odd_twist(model: &CurveModel) -> CurveElement {
    let half_q2 = &model.q().coeff(2) * &Rational::new(1, 2);
    model.sub(&model.x(), &model.scale(&model.t(), &half_q2))
}

/// The bracket tensor of a curve: for each basis pair,
/// `N·S·(e_a∧e_b) + e_a⊗De_b + De_b⊗e_a − e_b⊗De_a − De_a⊗e_b`, paired with `φ⊗φ`,
/// where `D` is [`CorrectionOperators::standard`].
pub fn build_tensor(model: &CurveModel) -> Result<BracketTensor, BracketError> {
    build_tensor_with(model, BuildOptions::default())
}

pub fn build_tensor_with(
    model: &CurveModel,
    opts: BuildOptions,
) -> Result<BracketTensor, BracketError> {
    let space = SectionSpace::new(model);
    let n = Rational::from_int(space.dim() as i64);
    let mut ops = CorrectionOperators::standard(&space);
    if opts.reading == KernelReading::Literal && model.parity() == Parity::Odd {
        ops = ops.absorb_literal_reading(&space, &n);
    }
    assemble(&space, &ops, &n, opts)
}

/// `S·(s₁∧s₂) + s₁⊗A(s₂) − s₂⊗A(s₁) + B(s₂)⊗s₁ − B(s₁)⊗s₂`, paired with `φ⊗φ`.
pub fn build_tensor_generic(
    model: &CurveModel,
    ops: &CorrectionOperators,
    opts: BuildOptions,
) -> Result<BracketTensor, BracketError> {
    let space = SectionSpace::new(model);
    if ops.a.len() != space.dim() || ops.b.len() != space.dim() {
        return Err(BracketError::DimensionMismatch {
            expected: space.dim(),
            found: ops.a.len().min(ops.b.len()),
        });
    }
    assemble(&space, ops, &Rational::one(), opts)
}

fn assemble(
    space: &SectionSpace,
    ops: &CorrectionOperators,
    kernel_scale: &Rational,
    opts: BuildOptions,
) -> Result<BracketTensor, BracketError> {
    let model = space.model();
    let n = space.dim();
    let kernel = SzegoKernel::with_reading(model, opts.reading);
    let sign = Rational::from_int(opts.sign() as i64);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let forms: Vec<Result<QuadForm, BracketError>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let ring = BiRing::new(model);
            pair_form(&ring, space, &kernel, ops, kernel_scale, a, b)
                .map(|f| f.into_iter().map(|(k, v)| (k, &v * &sign)).collect())
        })
        .collect();
    let mut t = BracketTensor::zero(model.parity(), model.k(), n);
    t.curve = Some(model.clone());
    t.sign = opts.sign();
    t.provenance = Provenance::Curve;
    for (&(a, b), f) in pairs.iter().zip(forms) {
        t.set(a, b, f?);
    }
    Ok(t)
}

/// Two-point expression for one basis pair, before extraction.
pub fn pair_expression(
    ring: &BiRing<'_>,
    space: &SectionSpace,
    kernel: &SzegoKernel,
    ops: &CorrectionOperators,
    kernel_scale: &Rational,
    a: usize,
    b: usize,
) -> Result<BiCurveElement, CurveError> {
    let (ea, eb) = (&space.basis()[a], &space.basis()[b]);
    let sk = mult_kernel_antisym(ring, kernel, ea, eb)?;
    let mut acc = ring.scale(&sk, kernel_scale);
    acc = ring.add(&acc, &ring.tensor(ea, &ops.a[b]));
    acc = ring.sub(&acc, &ring.tensor(eb, &ops.a[a]));
    acc = ring.add(&acc, &ring.tensor(&ops.b[b], ea));
    acc = ring.sub(&acc, &ring.tensor(&ops.b[a], eb));
    Ok(acc)
}

fn pair_form(
    ring: &BiRing<'_>,
    space: &SectionSpace,
    kernel: &SzegoKernel,
    ops: &CorrectionOperators,
    kernel_scale: &Rational,
    a: usize,
    b: usize,
) -> Result<QuadForm, BracketError> {
    let not_in_space = |e: CurveError| match e {
        CurveError::NotInSpace { excess } => BracketError::TensorNotInSectionSpace { a, b, excess },
        other => BracketError::Curve(other),
    };
    let expr = pair_expression(ring, space, kernel, ops, kernel_scale, a, b)?;
    let d = ring.to_x_basis(&expr).map_err(not_in_space)?;
    let mat = space.extract_tensor(&d).map_err(not_in_space)?;
    let n = space.dim();
    let mut form = QuadForm::new();
    for u in 0..n {
        for v in u..n {
            let c = if u == v {
                mat[u][u].clone()
            } else {
                &mat[u][v] + &mat[v][u]
            };
            if !c.is_zero() {
                form.insert((u, v), c);
            }
        }
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Parity;
    use crate::exact::{q, UniPoly};

    fn generic_even(k: u32) -> CurveModel {
        CurveModel::even(
            k,
            UniPoly::from_ints(&[1, -2, 3]),
            UniPoly::from_ints(&[2, 0, -1, 5, 7]),
        )
        .unwrap()
    }

    fn generic_odd(k: u32) -> CurveModel {
        CurveModel::odd(
            k,
            q(3, 2),
            UniPoly::from_ints(&[-1, 1, 2]),
            UniPoly::from_ints(&[4, 1, 0, -3]),
        )
        .unwrap()
    }

    #[test]
    fn smallest_case() {
        let t = build_tensor(&CurveModel::even_a0(1, q(2, 1))).unwrap();
        assert_eq!(t.n, 2);
        assert_eq!(t.parity, Parity::Even);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn generic_matches_scaled_build() {
        for m in [
            generic_even(2),
            generic_even(3),
            generic_odd(1),
            generic_odd(2),
        ] {
            let space = SectionSpace::new(&m);
            let n = Rational::from_int(space.dim() as i64);
            let ops = CorrectionOperators::standard(&space);
            let ops = CorrectionOperators {
                a: ops.a.iter().map(|e| m.scale(e, &n.recip())).collect(),
                b: ops.b.iter().map(|e| m.scale(e, &n.recip())).collect(),
                e_divisor: ops.e_divisor,
            };
            let g = build_tensor_generic(&m, &ops, BuildOptions::default()).unwrap();
            let t = build_tensor(&m).unwrap();
            assert!(g.scale(&n).same_pi(&t), "{m:?}");
        }
    }

    #[test]
    fn kernel_alone_leaves_section_space() {
        let m = generic_even(2);
        let space = SectionSpace::new(&m);
        let err = build_tensor_generic(
            &m,
            &CorrectionOperators::zero(&space),
            BuildOptions::default(),
        )
        .unwrap_err();
        assert!(
            matches!(err, BracketError::TensorNotInSectionSpace { .. }),
            "{err}"
        );
    }

    #[test]
    fn plain_derivation_fails_for_odd_curves() {
        let m = generic_odd(2);
        let space = SectionSpace::new(&m);
        let n = Rational::from_int(space.dim() as i64);
        let ops = CorrectionOperators::derivation(&space, &n.recip());
        let err = build_tensor_generic(&m, &ops, BuildOptions::default()).unwrap_err();
        assert!(
            matches!(err, BracketError::TensorNotInSectionSpace { .. }),
            "{err}"
        );
    }

    #[test]
    fn equal_arguments_give_zero_row() {
        let m = generic_odd(2);
        let space = SectionSpace::new(&m);
        let ring = BiRing::new(&m);
        let kernel = SzegoKernel::new(&m);
        let ops = CorrectionOperators::derivation(&space, &q(1, 1));
        for a in 0..space.dim() {
            let e = pair_expression(&ring, &space, &kernel, &ops, &q(5, 1), a, a).unwrap();
            assert!(e.is_zero());
        }
    }

    #[test]
    fn sign_flip_negates() {
        let m = generic_odd(1);
        let t = build_tensor(&m).unwrap();
        let f = build_tensor_with(
            &m,
            BuildOptions {
                sign_flip: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(t.scale(&q(-1, 1)).same_pi(&f));
        assert_eq!(f.sign, -t.sign);
    }
}
