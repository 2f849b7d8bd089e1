use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::{BracketTensor, FamilyBasis};
use crate::exact::linalg::{det_unipoly, rank};
use crate::exact::{Monomial, Rational, UniPoly};

use super::chart::descend_to_chart;
use super::VerifyError;

/// Bound on numerators and denominators of sampled coordinates.
pub const SAMPLE_BOUND: i64 = 1000;

/// Number of random lines scanned for rank drops by [`rank_scan`].
pub const DEFAULT_PENCILS: usize = 3;

/// Rank of the family as projective bivectors: one row per tensor holding all
/// chart structure-function coefficients.
pub fn independence_rank(family: &FamilyBasis) -> usize {
    tensor_rank(&family.tensors)
}

pub fn tensor_rank(tensors: &[BracketTensor]) -> usize {
    let Some(first) = tensors.first() else {
        return 0;
    };
    let n = first.n;
    let rows: Vec<BTreeMap<(usize, usize, usize, Monomial), Rational>> = tensors
        .par_iter()
        .map(|t| {
            assert_eq!(t.n, n, "dimension mismatch");
            let mut row = BTreeMap::new();
            for m in 0..n {
                let cb = descend_to_chart(t, m);
                for (&(i, j), p) in cb.functions() {
                    for (mono, c) in p.terms() {
                        row.insert((m, i, j, mono.clone()), c.clone());
                    }
                }
            }
            row
        })
        .collect();
    let keys: BTreeSet<_> = rows.iter().flat_map(|r| r.keys().cloned()).collect();
    let dense: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            keys.iter()
                .map(|k| r.get(k).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    rank(&dense)
}

/// Gram matrix of `M = (π_ab(φ))` on the basis `b_i = φ_p·e_i − φ_i·e_p`
/// (`i ≠ p`) of `⟨φ⟩⊥`, where `p` is the first nonzero coordinate.
fn restricted_gram(m: &[Vec<Rational>], phi: &[Rational]) -> Vec<Vec<Rational>> {
    let n = phi.len();
    let p = phi
        .iter()
        .position(|x| !x.is_zero())
        .expect("nonzero point");
    let idx: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    // (M b_j)_r = φ_p·M[r][j] − φ_j·M[r][p]
    let mb: Vec<Vec<Rational>> = idx
        .iter()
        .map(|&j| {
            (0..n)
                .map(|r| &(&phi[p] * &m[r][j]) - &(&phi[j] * &m[r][p]))
                .collect()
        })
        .collect();
    idx.iter()
        .map(|&i| {
            idx.iter()
                .enumerate()
                .map(|(jj, _)| &(&phi[p] * &mb[jj][i]) - &(&phi[i] * &mb[jj][p]))
                .collect()
        })
        .collect()
}

/// Rank of the bracket at `[φ]`: the rank of `π(φ)` on `⟨φ⟩⊥`.
pub fn rank_at_point(t: &BracketTensor, phi: &[Rational]) -> Result<usize, VerifyError> {
    if phi.len() != t.n {
        return Err(VerifyError::DimensionMismatch {
            expected: t.n,
            found: phi.len(),
        });
    }
    if phi.iter().all(Rational::is_zero) {
        return Err(VerifyError::ZeroVector);
    }
    Ok(rank(&restricted_gram(&t.eval_matrix(phi), phi)))
}

/// A random line `φ(s) = base + s·direction` scanned for rank drops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilReport {
    pub base: Vec<Rational>,
    pub direction: Vec<Rational>,
    /// Degree of the gcd of all principal minors of generic size (0: no drop on the line).
    pub drop_degree: usize,
    /// Parameter value and rank, when the drop polynomial has a rational root.
    pub witness: Option<(Rational, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub seed: u64,
    pub points: Vec<Vec<Rational>>,
    pub ranks: Vec<usize>,
    pub histogram: BTreeMap<usize, usize>,
    pub generic_rank: usize,
    /// Indices of sample points whose rank is below `generic_rank − 2`.
    pub flagged: Vec<usize>,
    pub pencils: Vec<PencilReport>,
}

impl RankReport {
    /// `rank,count` lines with a header.
    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("rank,count\n");
        for (r, c) in &self.histogram {
            s.push_str(&format!("{r},{c}\n"));
        }
        s
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
        rng.gen_range(1..=SAMPLE_BOUND),
    )
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| random_rational(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn rank_scan(t: &BracketTensor, samples: usize, seed: u64) -> RankReport {
    rank_scan_with(t, samples, seed, DEFAULT_PENCILS)
}

pub fn rank_scan_with(t: &BracketTensor, samples: usize, seed: u64, pencils: usize) -> RankReport {
    assert!(samples >= 1, "need at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<Rational>> = (0..samples).map(|_| random_point(&mut rng, t.n)).collect();
    let lines: Vec<(Vec<Rational>, Vec<Rational>)> = (0..pencils)
        .map(|_| (random_point(&mut rng, t.n), random_point(&mut rng, t.n)))
        .collect();
    let ranks: Vec<usize> = points
        .par_iter()
        .map(|p| rank_at_point(t, p).expect("nonzero sample"))
        .collect();
    let mut histogram = BTreeMap::new();
    for &r in &ranks {
        *histogram.entry(r).or_insert(0) += 1;
    }
    let generic_rank = ranks.iter().copied().max().unwrap_or(0);
    let flagged = ranks
        .iter()
        .enumerate()
        .filter(|(_, &r)| r + 2 < generic_rank)
        .map(|(i, _)| i)
        .collect();
    let pencils = lines
        .into_par_iter()
        .map(|(b, d)| scan_line(t, b, d, generic_rank))
        .collect();
    RankReport {
        seed,
        points,
        ranks,
        histogram,
        generic_rank,
        flagged,
        pencils,
    }
}

fn uni_linear(a: &Rational, b: &Rational) -> UniPoly {
    UniPoly::from_coeffs(vec![a.clone(), b.clone()])
}

fn scan_line(
    t: &BracketTensor,
    base: Vec<Rational>,
    direction: Vec<Rational>,
    generic: usize,
) -> PencilReport {
    let n = t.n;
    let phi: Vec<UniPoly> = base
        .iter()
        .zip(&direction)
        .map(|(a, b)| uni_linear(a, b))
        .collect();
    let mut m = vec![vec![UniPoly::zero(); n]; n];
    for (&(a, b), form) in t.entries() {
        let mut v = UniPoly::zero();
        for (&(u, w), c) in form {
            v = &v + &(&phi[u] * &phi[w]).scale(c);
        }
        m[b][a] = -&v;
        m[a][b] = v;
    }
    let p = (0..n)
        .find(|&i| !base[i].is_zero() || !direction[i].is_zero())
        .unwrap_or(0);
    let idx: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let mb: Vec<Vec<UniPoly>> = idx
        .iter()
        .map(|&j| {
            (0..n)
                .map(|r| &(&phi[p] * &m[r][j]) - &(&phi[j] * &m[r][p]))
                .collect()
        })
        .collect();
    let gram: Vec<Vec<UniPoly>> = idx
        .iter()
        .map(|&i| {
            (0..idx.len())
                .map(|jj| &(&phi[p] * &mb[jj][i]) - &(&phi[i] * &mb[jj][p]))
                .collect()
        })
        .collect();
    let mut g = UniPoly::zero();
    if generic > 0 && generic <= gram.len() {
        for subset in subsets(gram.len(), generic) {
            let minor: Vec<Vec<UniPoly>> = subset
                .iter()
                .map(|&i| subset.iter().map(|&j| gram[i][j].clone()).collect())
                .collect();
            g = g.gcd(&det_unipoly(&minor));
            if g.degree() == Some(0) {
                break;
            }
        }
    }
    // The basis of ⟨φ⟩⊥ degenerates where φ_p vanishes; strip that factor.
    if !phi[p].is_zero() && phi[p].degree() == Some(1) {
        let root = -&(&phi[p].coeff(0) / &phi[p].coeff(1));
        while g.degree().is_some_and(|d| d > 0) {
            let (qt, r) = g.div_linear(&root);
            if !r.is_zero() {
                break;
            }
            g = qt;
        }
    }
    let drop_degree = if g.is_zero() {
        0
    } else {
        g.degree().unwrap_or(0)
    };
    let witness = (drop_degree == 1).then(|| {
        let s = -&(&g.coeff(0) / &g.coeff(1));
        let point: Vec<Rational> = base
            .iter()
            .zip(&direction)
            .map(|(a, b)| a + &(b * &s))
            .collect();
        let r = rank_at_point(t, &point).unwrap_or(0);
        (s, r)
    });
    PencilReport {
        base,
        direction,
        drop_degree,
        witness,
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Parity;
    use crate::exact::q;

    #[test]
    fn zero_tensor_has_rank_zero() {
        let t = BracketTensor::zero(Parity::Even, 2, 4);
        assert_eq!(
            rank_at_point(&t, &[q(1, 1), q(2, 1), q(3, 1), q(4, 1)]).unwrap(),
            0
        );
        let r = rank_scan(&t, 5, 1);
        assert!(r.ranks.iter().all(|&x| x == 0));
        assert_eq!(r.histogram.get(&0), Some(&5));
    }

    #[test]
    fn zero_vector_is_rejected() {
        let t = BracketTensor::zero(Parity::Even, 1, 2);
        assert_eq!(
            rank_at_point(&t, &[q(0, 1), q(0, 1)]),
            Err(VerifyError::ZeroVector)
        );
    }

    #[test]
    fn euler_terms_have_rank_zero() {
        // E∧X with X = ∂₀ restricted to ⟨φ⟩⊥ vanishes
        let mut t = BracketTensor::zero(Parity::Even, 2, 4);
        for b in 1..4 {
            t.add_coeff(0, b, 0, b, &q(-1, 1));
        }
        assert_eq!(
            rank_at_point(&t, &[q(2, 1), q(-1, 1), q(3, 1), q(1, 2)]).unwrap(),
            0
        );
    }

    #[test]
    fn constant_symplectic_rank() {
        let mut t = BracketTensor::zero(Parity::Even, 2, 4);
        t.add_coeff(0, 1, 2, 2, &q(1, 1));
        t.add_coeff(2, 3, 0, 0, &q(1, 1));
        let r = rank_at_point(&t, &[q(1, 1), q(1, 1), q(1, 1), q(1, 1)]).unwrap();
        assert!(r.is_multiple_of(2) && r <= 2);
    }

    #[test]
    fn scan_is_deterministic() {
        let mut t = BracketTensor::zero(Parity::Odd, 1, 3);
        t.add_coeff(0, 1, 2, 2, &q(1, 1));
        t.add_coeff(1, 2, 0, 0, &q(1, 1));
        assert_eq!(rank_scan(&t, 6, 9), rank_scan(&t, 6, 9));
        assert_eq!(
            rank_scan(&t, 6, 9).histogram_csv().lines().next(),
            Some("rank,count")
        );
    }
}
