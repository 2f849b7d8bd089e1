use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{Rational, UniPoly};

use super::CurveError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Degree bound on `P`.
    pub fn p_degree_bound(self) -> usize {
        match self {
            Parity::Even => 4,
            Parity::Odd => 3,
        }
    }

    /// Dimension of the section space for a given `k`.
    pub fn section_dim(self, k: u32) -> usize {
        match self {
            Parity::Even => 2 * k as usize,
            Parity::Odd => 2 * k as usize + 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(CurveError::InvalidModel(format!(
                "unknown parity {other:?}"
            ))),
        }
    }
}

/// A member of one of the two genus-one families:
///
/// * even: `x² = Q(t)x + P(t)`, `deg Q ≤ 2`, `deg P ≤ 4`;
/// * odd: `(t+c)x² = Q(t)x + P(t)`, `deg Q ≤ 2`, `deg P ≤ 3`.
///
/// Internally everything is expressed through `L = 1` (even) or `L = t+c`
/// (odd), the coordinate `w = L·x − Q/2` and `R = L·P + Q²/4`, so that the
/// curve becomes `w² = R(t)` in both cases.
#[derive(Clone, PartialEq, Eq)]
pub struct CurveModel {
    parity: Parity,
    k: u32,
    q: UniPoly,
    p: UniPoly,
    c: Rational,
    l: UniPoly,
    half_q: UniPoly,
    r: UniPoly,
    r_prime: UniPoly,
}

impl CurveModel {
    pub fn new(
        parity: Parity,
        k: u32,
        q: UniPoly,
        p: UniPoly,
        c: Rational,
    ) -> Result<Self, CurveError> {
        if k == 0 {
            return Err(CurveError::InvalidModel("k must be at least 1".into()));
        }
        if q.degree().unwrap_or(0) > 2 {
            return Err(CurveError::InvalidModel(format!(
                "deg Q = {} exceeds 2",
                q.degree().unwrap()
            )));
        }
        let pb = parity.p_degree_bound();
        if p.degree().unwrap_or(0) > pb {
            return Err(CurveError::InvalidModel(format!(
                "deg P = {} exceeds {pb}",
                p.degree().unwrap()
            )));
        }
        if parity == Parity::Even && !c.is_zero() {
            return Err(CurveError::InvalidModel(
                "c is only meaningful for the odd family".into(),
            ));
        }
        let l = match parity {
            Parity::Even => UniPoly::one(),
            Parity::Odd => UniPoly::linear(c.clone()),
        };
        let half_q = q.scale(&Rational::new(1, 2));
        let r = &(&l * &p) + &(&half_q * &half_q);
        let r_prime = r.derivative();
        Ok(CurveModel {
            parity,
            k,
            q,
            p,
            c,
            l,
            half_q,
            r,
            r_prime,
        })
    }

    pub fn even(k: u32, q: UniPoly, p: UniPoly) -> Result<Self, CurveError> {
        Self::new(Parity::Even, k, q, p, Rational::zero())
    }

    pub fn odd(k: u32, c: Rational, q: UniPoly, p: UniPoly) -> Result<Self, CurveError> {
        Self::new(Parity::Odd, k, q, p, c)
    }

    /// Even curve `x² = a₀`.
    pub fn even_a0(k: u32, a0: Rational) -> Self {
        Self::even(k, UniPoly::zero(), UniPoly::constant(a0)).expect("valid model")
    }

    /// Odd curve `t·x² = a₀`.
    pub fn odd_a0(k: u32, a0: Rational) -> Self {
        Self::odd(k, Rational::zero(), UniPoly::zero(), UniPoly::constant(a0)).expect("valid model")
    }

    /// Same curve, different `k`.
    pub fn with_k(&self, k: u32) -> Result<Self, CurveError> {
        Self::new(
            self.parity,
            k,
            self.q.clone(),
            self.p.clone(),
            self.c.clone(),
        )
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> &UniPoly {
        &self.q
    }

    pub fn p(&self) -> &UniPoly {
        &self.p
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `1` (even) or `t + c` (odd).
    pub fn l(&self) -> &UniPoly {
        &self.l
    }

    pub fn half_q(&self) -> &UniPoly {
        &self.half_q
    }

    /// `R` with `w² = R(t)`.
    pub fn r(&self) -> &UniPoly {
        &self.r
    }

    pub fn r_prime(&self) -> &UniPoly {
        &self.r_prime
    }

    /// Dimension of the section space `ℱ_N`, which is also `N`.
    pub fn dim(&self) -> usize {
        self.parity.section_dim(self.k)
    }

    /// Root of `L`, for the odd family.
    pub fn l_root(&self) -> Rational {
        -&self.c
    }

    /// `R` squarefree of degree 3 or 4, so that `w² = R` is a smooth genus-one curve.
    pub fn is_smooth(&self) -> bool {
        match self.r.degree() {
            Some(d) if d >= 3 => self.r.gcd(&self.r_prime).degree() == Some(0),
            _ => false,
        }
    }

    /// Curve with coefficients `p/q`, `|p| ≤ bound`, `1 ≤ q ≤ 3`, drawn from `rng`.
    pub fn random<G: rand::Rng>(parity: Parity, k: u32, bound: i64, rng: &mut G) -> Self {
        let mut coeff = || Rational::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=3));
        let q = UniPoly::from_coeffs((0..3).map(|_| coeff()).collect());
        let p = UniPoly::from_coeffs((0..=parity.p_degree_bound()).map(|_| coeff()).collect());
        let c = match parity {
            Parity::Even => Rational::zero(),
            Parity::Odd => coeff(),
        };
        Self::new(parity, k, q, p, c).expect("degree bounds hold by construction")
    }

    /// Like [`CurveModel::random`], redrawing until the curve is smooth.
    pub fn random_smooth<G: rand::Rng>(parity: Parity, k: u32, bound: i64, rng: &mut G) -> Self {
        loop {
            let m = Self::random(parity, k, bound, rng);
            if m.is_smooth() {
                return m;
            }
        }
    }
}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CurveModel({}, k={}, Q={}, P={}",
            self.parity, self.k, self.q, self.p
        )?;
        if self.parity == Parity::Odd {
            write!(f, ", c={}", self.c)?;
        }
        write!(f, ")")
    }
}

/// Wire form: `{parity, k, Q: [ascending], P: [ascending], c}`.
#[derive(Serialize, Deserialize)]
struct CurveJson {
    parity: Parity,
    k: u32,
    #[serde(rename = "Q")]
    q: Vec<Rational>,
    #[serde(rename = "P")]
    p: Vec<Rational>,
    c: Option<Rational>,
}

impl Serialize for CurveModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CurveJson {
            parity: self.parity,
            k: self.k,
            q: self.q.coeffs().to_vec(),
            p: self.p.coeffs().to_vec(),
            c: (self.parity == Parity::Odd).then(|| self.c.clone()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CurveModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = CurveJson::deserialize(deserializer)?;
        CurveModel::new(
            j.parity,
            j.k,
            UniPoly::from_coeffs(j.q),
            UniPoly::from_coeffs(j.p),
            j.c.unwrap_or_default(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn derived_data() {
        let m = CurveModel::even(
            2,
            UniPoly::from_ints(&[0, 2]),
            UniPoly::from_ints(&[1, 0, 0, 0, 1]),
        )
        .unwrap();
        // R = P + Q²/4 = t^4 + t^2 + 1
        assert_eq!(m.r(), &UniPoly::from_ints(&[1, 0, 1, 0, 1]));
        let o = CurveModel::odd(1, q(2, 1), UniPoly::zero(), UniPoly::from_ints(&[3])).unwrap();
        // R = (t+2)·3
        assert_eq!(o.r(), &UniPoly::from_ints(&[6, 3]));
        assert_eq!(o.dim(), 3);
    }

    #[test]
    fn degree_bounds() {
        assert!(CurveModel::even(2, UniPoly::from_ints(&[0, 0, 0, 1]), UniPoly::zero()).is_err());
        assert!(CurveModel::odd(
            2,
            q(0, 1),
            UniPoly::zero(),
            UniPoly::from_ints(&[0, 0, 0, 0, 1])
        )
        .is_err());
        assert!(CurveModel::even(0, UniPoly::zero(), UniPoly::zero()).is_err());
    }

    #[test]
    fn json_shape() {
        let m = CurveModel::odd(
            2,
            q(1, 2),
            UniPoly::from_ints(&[1]),
            UniPoly::from_ints(&[0, 3]),
        )
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"parity":"odd","k":2,"Q":["1/1"],"P":["0/1","3/1"],"c":"1/2"}"#
        );
        let back: CurveModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
