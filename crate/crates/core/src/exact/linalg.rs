//! Fraction-free elimination: exact ranks over ℚ and determinants over ℚ[s].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;
use super::unipoly::UniPoly;

/// Clear denominators row by row, so that rank is unchanged.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Rank of a rational matrix (rows of equal length) by Bareiss elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m = integer_rows(rows);
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in col + 1..ncols {
                let v = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        r += 1;
    }
    r
}

/// Determinant of a square matrix over `ℚ[s]` (Bareiss, exact divisions).
pub fn det_unipoly(mat: &[Vec<UniPoly>]) -> UniPoly {
    let n = mat.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut m = mat.to_vec();
    let mut prev = UniPoly::one();
    let mut sign = 1i64;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                let (quot, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = quot;
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&Rational::from_int(sign))
}
