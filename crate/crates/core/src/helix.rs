//! Grothendieck-group bookkeeping for exceptional collections: the Fibonacci
//! helix in `⟨𝒪(1), 𝒪(2)⟩` on ℙ², mutations, the Euler form on
//! `(degree, rank)` vectors and the parameter search for bihamiltonian
//! extensions.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Fibonacci number with `f₀ = 0`, `f₁ = 1`.
pub fn fib(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::from(1));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

fn fib_i128(n: u32) -> i128 {
    fib(n).to_i128().expect("Fibonacci number exceeds i128")
}

/// Class in `K₀` recorded through rank, degree and Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct K0Class {
    pub rank: i128,
    pub degree: i128,
    pub chi: i128,
}

impl K0Class {
    pub const fn new(rank: i128, degree: i128, chi: i128) -> Self {
        K0Class { rank, degree, chi }
    }

    /// `(degree, rank)`, the vector the Euler form is evaluated on.
    pub fn dr(&self) -> (i128, i128) {
        (self.degree, self.rank)
    }
}

impl Add for K0Class {
    type Output = K0Class;
    fn add(self, o: K0Class) -> K0Class {
        K0Class::new(self.rank + o.rank, self.degree + o.degree, self.chi + o.chi)
    }
}

impl Sub for K0Class {
    type Output = K0Class;
    fn sub(self, o: K0Class) -> K0Class {
        K0Class::new(self.rank - o.rank, self.degree - o.degree, self.chi - o.chi)
    }
}

impl Mul<K0Class> for i128 {
    type Output = K0Class;
    fn mul(self, v: K0Class) -> K0Class {
        K0Class::new(self * v.rank, self * v.degree, self * v.chi)
    }
}

/// `𝒪(1)` on ℙ².
pub const E0: K0Class = K0Class::new(1, 1, 3);
/// `𝒪(2)` on ℙ².
pub const E1: K0Class = K0Class::new(1, 2, 6);

/// `[E_{−n}] = f_{2(n+1)}[E₀] − f_{2n}[E₁]` for `n ≥ 0`, and
/// `[E_n] = f_{2n}[E₁] − f_{2(n−1)}[E₀]` for `n ≥ 1`.
pub fn helix_class(n: i32) -> K0Class {
    if n <= 0 {
        let m = n.unsigned_abs();
        fib_i128(2 * (m + 1)) * E0 - fib_i128(2 * m) * E1
    } else {
        let m = n as u32;
        fib_i128(2 * m) * E1 - fib_i128(2 * (m - 1)) * E0
    }
}

/// One row of the helix table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelixRow {
    pub n: i32,
    pub rank: i128,
    pub chi: i128,
}

pub fn helix_table(from: i32, to: i32) -> Vec<HelixRow> {
    (from..=to)
        .map(|n| {
            let c = helix_class(n);
            HelixRow {
                n,
                rank: c.rank,
                chi: c.chi,
            }
        })
        .collect()
}

/// `χ((d₁,r₁),(d₂,r₂)) = d₂r₁ − d₁r₂`.
pub fn euler_pairing(v1: &K0Class, v2: &K0Class) -> i128 {
    let ((d1, r1), (d2, r2)) = (v1.dr(), v2.dr());
    d2 * r1 - d1 * r2
}

/// `2·v_cur − v_prev`, the class after a mutation through a two-dimensional `Ext`.
pub fn mutate(v_prev: &K0Class, v_cur: &K0Class) -> K0Class {
    2 * *v_cur - *v_prev
}

/// `V₂, V₃, …` from the exceptional pair `(V₁, V₂)`, starting with `V₂` and
/// `V₃ = V₁ + 2V₂` and continuing by [`mutate`].
pub fn biham_sequence(v1: &K0Class, v2: &K0Class, len: usize) -> Vec<K0Class> {
    let mut out = Vec::with_capacity(len);
    let mut prev = *v2;
    let mut cur = *v1 + 2 * *v2;
    for i in 0..len {
        if i == 0 {
            out.push(prev);
            continue;
        }
        out.push(cur);
        let next = mutate(&prev, &cur);
        prev = cur;
        cur = next;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BihamParams {
    /// `r = 2m − 1`.
    pub m: u64,
    pub k: u64,
    /// `+1` or `−1` in `d = … ± 1`.
    pub sign: i8,
    /// Hirzebruch index: `0` for even `d`, `1` for odd `d`.
    pub n: u8,
}

impl BihamParams {
    /// The `d` this witness realizes for rank `2m − 1`.
    pub fn degree(&self) -> i128 {
        let r = 2 * self.m as i128 - 1;
        let k = self.k as i128;
        let base = if self.n == 0 {
            (2 * k - 1) * r
        } else {
            (2 * k - 2) * r
        };
        base + self.sign as i128
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HelixError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no solution: {d} is not ±1 modulo {r}")]
    NoSolution { d: u64, r: u64 },
}

/// Writes `d = (2k−1)r ± 1` (even `d`) or `d = (2k−2)r ± 1` (odd `d`) with `r = 2m − 1`.
pub fn solve_biham_params(d: u64, r: u64) -> Result<BihamParams, HelixError> {
    if r == 0 || r.is_multiple_of(2) {
        return Err(HelixError::InvalidInput(format!(
            "r = {r} must be odd and positive"
        )));
    }
    if d <= r {
        return Err(HelixError::InvalidInput(format!(
            "need d > r, got d = {d}, r = {r}"
        )));
    }
    let m = r.div_ceil(2);
    let n = if d.is_multiple_of(2) { 0 } else { 1 };
    for sign in [1i8, -1] {
        let shifted = if sign > 0 { d - 1 } else { d + 1 };
        if shifted % r != 0 {
            continue;
        }
        let q = shifted / r;
        // q ≡ d + 1 (mod 2) because r and the sign are odd
        let k = if n == 0 { q.div_ceil(2) } else { q / 2 + 1 };
        if k >= 1 && (n == 0 || q >= 1) {
            return Ok(BihamParams { m, k, sign, n });
        }
    }
    Err(HelixError::NoSolution { d, r })
}

/// A decomposition `c·v₀ = v₁ + v₂` with `χ(v₁, v₀) = 1`, where
/// `c = gcd(d, r+1)` and `v₀ = (d/c, (r+1)/c)`. Returns `v₁` as `(d₁, r₁)`.
pub fn decomposition_witness(d: i128, r: i128) -> Option<(i128, i128)> {
    if d <= 0 || r <= 0 {
        return None;
    }
    let c = d.gcd(&(r + 1));
    let (d0, r0) = (d / c, (r + 1) / c);
    if r0 == 1 {
        return Some((d0 - 1, 1));
    }
    let v0 = K0Class::new(r0, d0, 0);
    (1..r0).find_map(|r1| {
        let num = d0 * r1 - 1;
        (num % r0 == 0)
            .then(|| (num / r0, r1))
            .filter(|&(d1, r1)| euler_pairing(&K0Class::new(r1, d1, 0), &v0) == 1)
    })
}
