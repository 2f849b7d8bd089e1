use std::collections::BTreeMap;

use serde::Serialize;

use crate::exact::{LaurentSeries, QuadExtElem, Rational};

use super::bielement::{BiRing, KernelReading, SzegoKernel};
use super::model::{CurveModel, Parity};
use super::CurveError;

/// Extra series terms carried beyond what the residue strictly needs.
const SLACK: i64 = 4;

/// Exact residue data of the Szegő kernel, with respect to the
/// trivialization `η = −dt / (2w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueCertificate {
    pub curve: CurveModel,
    pub reading: KernelReading,
    /// `a`, the leading coefficient of `R`; the branches at infinity live in `ℚ(√a)`.
    pub radicand: Rational,
    pub diagonal_residue: Rational,
    /// `Res(S·η)` at the two points over `t = ∞` (branches `w ≈ +√a·t²` and `w ≈ −√a·t²`).
    pub infinity_residues: [QuadExtElem; 2],
    pub truncation_order: i64,
}

pub fn verify_szego_residues(model: &CurveModel) -> Result<ResidueCertificate, CurveError> {
    verify_szego_residues_with(model, KernelReading::Symmetric)
}

pub fn verify_szego_residues_with(
    model: &CurveModel,
    reading: KernelReading,
) -> Result<ResidueCertificate, CurveError> {
    let r = model.r();
    if r.degree() != Some(4) {
        return Err(CurveError::DegenerateDivisor(format!(
            "deg R = {} (need 4)",
            r.degree().map_or("-inf".to_string(), |d| d.to_string())
        )));
    }
    let a = r.leading();
    let ring = BiRing::new(model);
    let kernel = SzegoKernel::with_reading(model, reading);

    // (i) numerator on the diagonal divided by 2w
    let diag = ring.restrict_diagonal(&kernel.numerator);
    let diagonal_residue = match (diag.alpha.is_zero(), diag.beta.degree(), diag.denom_power) {
        (true, Some(0), 0) => diag.beta.leading() / Rational::from_int(2),
        _ => {
            return Err(CurveError::ResidueMismatch(format!(
                "diagonal residue is not constant: ({diag}) / 2w"
            )))
        }
    };
    if !diagonal_residue.is_one() {
        return Err(CurveError::ResidueMismatch(format!(
            "diagonal residue {diagonal_residue}, expected 1"
        )));
    }

    // (ii) expansions at the two points over t = ∞ in τ = 1/t
    let num = &kernel.numerator;
    let pmax = num
        .coeffs
        .iter()
        .filter_map(|c| c.degree_in(0))
        .max()
        .unwrap_or(0) as i64;
    let trunc = pmax + 1 + SLACK;
    let m1 = num.denom_powers.0;
    // s² = τ⁴·R(1/τ)
    let rev: Vec<Rational> = (0..=4).map(|j| r.coeff(4 - j)).collect();
    let s = LaurentSeries::from_rationals("tau", &a, 0, &rev, trunc).sqrt()?;
    let s_inv = s.invert()?;
    // L(1/τ)^(−m1) = τ^m1·(1 + cτ)^(−m1)
    let lfac = if model.parity() == Parity::Odd && m1 > 0 {
        let base = LaurentSeries::from_rationals(
            "tau",
            &a,
            0,
            &[Rational::one(), model.c().clone()],
            trunc,
        )
        .invert()?;
        (1..m1)
            .fold(base.clone(), |acc, _| acc.mul(&base))
            .shift(m1 as i64)
    } else {
        LaurentSeries::from_rationals("tau", &a, 0, &[Rational::one()], trunc)
    };

    let mut residues = Vec::with_capacity(2);
    for sign in [1i64, -1] {
        // w1⁻¹·L1^(−m1) and L1^(−m1)
        let f0 = s_inv
            .shift(2)
            .scale(&QuadExtElem::rational(Rational::from_int(sign), &a))
            .mul(&lfac);
        let f = [f0, lfac.clone()];
        let mut acc: BTreeMap<(u8, u16), QuadExtElem> = BTreeMap::new();
        for (idx, coeff) in num.coeffs.iter().enumerate() {
            let (i, j) = (idx & 1, (idx >> 1) as u8);
            let fi = &f[i];
            for (mono, gamma) in coeff.terms() {
                let (p, q) = (mono.exps()[0] as i64, mono.exps()[1]);
                let half_gamma = gamma / &Rational::from_int(2);
                for e in 0..=(p - fi.leading_exponent).max(-1) {
                    let c = fi.coeff(p - e)?;
                    if c.is_zero() {
                        continue;
                    }
                    let slot = acc
                        .entry((j, q + e as u16))
                        .or_insert_with(|| QuadExtElem::zero(&a));
                    *slot = &*slot + &c.scale(&half_gamma);
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        let value = acc.remove(&(0, 0)).unwrap_or_else(|| QuadExtElem::zero(&a));
        if !acc.is_empty() || (num.denom_powers.1 > 0 && !value.is_zero()) {
            return Err(CurveError::ResidueMismatch(format!(
                "residue at infinity depends on the second point: {} extra terms",
                acc.len()
            )));
        }
        residues.push(value);
    }
    let [r0, r1]: [QuadExtElem; 2] = residues.try_into().expect("two branches");
    match model.parity() {
        Parity::Even => {
            let half = QuadExtElem::rational(Rational::new(1, 2), &a);
            if r0 != half || r1 != half {
                return Err(CurveError::ResidueMismatch(format!(
                    "infinity residues ({r0}, {r1}), expected (1/2, 1/2)"
                )));
            }
        }
        Parity::Odd => {
            if r0 != r1 {
                return Err(CurveError::ResidueMismatch(format!(
                    "infinity residues differ: {r0} vs {r1}"
                )));
            }
        }
    }
    Ok(ResidueCertificate {
        curve: model.clone(),
        reading,
        radicand: a,
        diagonal_residue,
        infinity_residues: [r0, r1],
        truncation_order: trunc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, UniPoly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quartic_example() {
        let m = CurveModel::even(1, UniPoly::zero(), UniPoly::from_ints(&[1, 0, 0, 0, 1])).unwrap();
        let cert = verify_szego_residues(&m).unwrap();
        assert!(cert.diagonal_residue.is_one());
        for r in &cert.infinity_residues {
            assert_eq!(r, &QuadExtElem::rational(q(1, 2), &q(1, 1)));
        }
    }

    #[test]
    fn degenerate() {
        let m = CurveModel::even_a0(2, q(3, 1));
        assert!(matches!(
            verify_szego_residues(&m),
            Err(CurveError::DegenerateDivisor(_))
        ));
    }

    fn rand_poly(rng: &mut ChaCha8Rng, deg: usize) -> UniPoly {
        UniPoly::from_coeffs(
            (0..=deg)
                .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect(),
        )
    }

    #[test]
    fn random_curves_both_parities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = [0, 0];
        while done[0] < 10 || done[1] < 10 {
            let odd = done[0] >= 10;
            let m = if odd {
                CurveModel::odd(
                    2,
                    q(rng.gen_range(-5..=5), 2),
                    rand_poly(&mut rng, 2),
                    rand_poly(&mut rng, 3),
                )
            } else {
                CurveModel::even(2, rand_poly(&mut rng, 2), rand_poly(&mut rng, 4))
            }
            .unwrap();
            if m.r().degree() != Some(4) {
                continue;
            }
            let cert = verify_szego_residues(&m).unwrap();
            assert!(cert.diagonal_residue.is_one());
            assert_eq!(cert.infinity_residues[0], cert.infinity_residues[1]);
            assert_eq!(
                cert.infinity_residues[0],
                QuadExtElem::rational(q(1, 2), &cert.radicand)
            );
            done[odd as usize] += 1;
        }
    }
}
