use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Parity};
use crate::exact::{Monomial, Poly, Rational, Vars};

/// Quadratic form `Σ_{u≤v} q_uv·φ_u·φ_v`, keyed by `(u, v)` with `u ≤ v`,
/// zero coefficients omitted.
pub type QuadForm = BTreeMap<(usize, usize), Rational>;

/// Where a tensor came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Curve,
    Combination { terms: Vec<(String, Rational)> },
    Manual { note: String },
}

/// Structure constants `π_ab(φ)` of a quadratic bivector on an
/// `n`-dimensional space, stored for `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTensor {
    pub parity: Parity,
    pub k: u32,
    pub n: usize,
    pub curve: Option<CurveModel>,
    pub sign: i8,
    pub provenance: Provenance,
    pi: BTreeMap<(usize, usize), QuadForm>,
}

impl BracketTensor {
    pub fn zero(parity: Parity, k: u32, n: usize) -> Self {
        BracketTensor {
            parity,
            k,
            n,
            curve: None,
            sign: 1,
            provenance: Provenance::Manual {
                note: "zero".into(),
            },
            pi: BTreeMap::new(),
        }
    }

    /// Set `π_ab` (either order; the form is negated for `a > b`).
    pub fn set(&mut self, a: usize, b: usize, form: QuadForm) {
        assert!(
            a != b && a < self.n && b < self.n,
            "bad index pair ({a}, {b})"
        );
        let (key, form) = if a < b {
            ((a, b), form)
        } else {
            ((b, a), form.into_iter().map(|(k, v)| (k, -v)).collect())
        };
        let form: QuadForm = form
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((u, v), c)| ((u.min(v), u.max(v)), c))
            .collect();
        if form.is_empty() {
            self.pi.remove(&key);
        } else {
            self.pi.insert(key, form);
        }
    }

    /// Add `c·φ_u·φ_v` to `π_ab`.
    pub fn add_coeff(&mut self, a: usize, b: usize, u: usize, v: usize, c: &Rational) {
        let (key, c) = if a < b {
            ((a, b), c.clone())
        } else {
            ((b, a), -c)
        };
        let slot = (u.min(v), u.max(v));
        let form = self.pi.entry(key).or_default();
        let val = form.entry(slot).or_insert_with(Rational::zero);
        *val += c;
        if val.is_zero() {
            form.remove(&slot);
            if form.is_empty() {
                self.pi.remove(&key);
            }
        }
    }

    /// `π_ab` as stored for `a < b`.
    pub fn form(&self, a: usize, b: usize) -> Option<&QuadForm> {
        self.pi.get(&(a, b))
    }

    /// Coefficient of `φ_u·φ_v` in `π_ab`, for any `a, b`.
    pub fn coeff(&self, a: usize, b: usize, u: usize, v: usize) -> Rational {
        if a == b {
            return Rational::zero();
        }
        let key = (a.min(b), a.max(b));
        let c = self
            .pi
            .get(&key)
            .and_then(|f| f.get(&(u.min(v), u.max(v))))
            .cloned()
            .unwrap_or_default();
        if a < b {
            c
        } else {
            -c
        }
    }

    /// Nonzero `(a, b)` entries in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &QuadForm)> {
        self.pi.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.pi.values().map(BTreeMap::len).sum()
    }

    /// Same coefficients (metadata ignored).
    pub fn same_pi(&self, other: &BracketTensor) -> bool {
        self.n == other.n && self.pi == other.pi
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &BracketTensor, s: &Rational) -> BracketTensor {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (&(a, b), form) in &other.pi {
            for (&(u, v), c) in form {
                out.add_coeff(a, b, u, v, &(c * s));
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> BracketTensor {
        let mut out = self.clone();
        if s.is_zero() {
            out.pi.clear();
            return out;
        }
        for form in out.pi.values_mut() {
            for c in form.values_mut() {
                *c = &*c * s;
            }
        }
        out
    }

    /// `Σ λ_i·T_i`, labelled by `labels`.
    pub fn linear_combination(
        tensors: &[&BracketTensor],
        coeffs: &[Rational],
        labels: &[String],
    ) -> BracketTensor {
        assert!(!tensors.is_empty() && tensors.len() == coeffs.len());
        let t0 = tensors[0];
        let mut out = BracketTensor::zero(t0.parity, t0.k, t0.n);
        for (t, c) in tensors.iter().zip(coeffs) {
            out = out.add_scaled(t, c);
        }
        out.provenance = Provenance::Combination {
            terms: labels.iter().cloned().zip(coeffs.iter().cloned()).collect(),
        };
        out
    }

    /// Evaluate the antisymmetric matrix `M_ab = π_ab(φ)`.
    pub fn eval_matrix(&self, phi: &[Rational]) -> Vec<Vec<Rational>> {
        let n = self.n;
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (&(a, b), form) in &self.pi {
            let mut val = Rational::zero();
            for (&(u, v), c) in form {
                val += &(c * &phi[u]) * &phi[v];
            }
            m[b][a] = -&val;
            m[a][b] = val;
        }
        m
    }

    /// `π_ab` as a polynomial in `n` variables.
    pub fn form_poly(&self, a: usize, b: usize, vars: &Vars) -> Poly {
        let mut p = Poly::zero(vars.clone());
        if a == b {
            return p;
        }
        let sign = if a < b {
            Rational::one()
        } else {
            -Rational::one()
        };
        if let Some(form) = self.pi.get(&(a.min(b), a.max(b))) {
            for (&(u, v), c) in form {
                let mut e = vec![0u16; self.n];
                e[u] += 1;
                e[v] += 1;
                p.add_term(Monomial::from_exps(&e), c * &sign);
            }
        }
        p
    }

    /// Whether every quadratic form only uses variables below `n` and every
    /// key is a proper pair; used after deserialization.
    pub fn validate(&self) -> Result<(), String> {
        for (&(a, b), form) in &self.pi {
            if a >= b || b >= self.n {
                return Err(format!("bad pair ({a}, {b})"));
            }
            for &(u, v) in form.keys() {
                if u > v || v >= self.n {
                    return Err(format!("bad monomial ({u}, {v}) in pair ({a}, {b})"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    u: usize,
    v: usize,
    val: Rational,
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    a: usize,
    b: usize,
    q: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    parity: Parity,
    k: u32,
    n: usize,
    curve: Option<CurveModel>,
    sign: i8,
    provenance: Provenance,
    pi: Vec<PairJson>,
}

impl Serialize for BracketTensor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut pi = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let q = self
                    .pi
                    .get(&(a, b))
                    .map(|f| {
                        f.iter()
                            .map(|(&(u, v), c)| TermJson {
                                u,
                                v,
                                val: c.clone(),
                            })
                            .collect()
                    })
                    .unwrap_or_default();
                pi.push(PairJson { a, b, q });
            }
        }
        TensorJson {
            parity: self.parity,
            k: self.k,
            n: self.n,
            curve: self.curve.clone(),
            sign: self.sign,
            provenance: self.provenance.clone(),
            pi,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BracketTensor {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = TensorJson::deserialize(deserializer)?;
        let mut t = BracketTensor::zero(j.parity, j.k, j.n);
        t.curve = j.curve;
        t.sign = j.sign;
        t.provenance = j.provenance;
        for p in j.pi {
            if p.a >= p.b || p.b >= j.n {
                return Err(serde::de::Error::custom(format!(
                    "bad pair ({}, {})",
                    p.a, p.b
                )));
            }
            for term in p.q {
                if term.u.max(term.v) >= j.n {
                    return Err(serde::de::Error::custom(format!(
                        "index out of range in pair ({}, {})",
                        p.a, p.b
                    )));
                }
                t.add_coeff(p.a, p.b, term.u, term.v, &term.val);
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn antisymmetry_and_json() {
        let mut t = BracketTensor::zero(Parity::Even, 2, 4);
        t.add_coeff(2, 0, 1, 3, &q(3, 2));
        t.add_coeff(0, 1, 0, 0, &q(-1, 1));
        assert_eq!(t.coeff(0, 2, 3, 1), q(-3, 2));
        assert_eq!(t.coeff(2, 0, 1, 3), q(3, 2));
        let m = t.eval_matrix(&[q(1, 1), q(2, 1), q(3, 1), q(4, 1)]);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(m[a][b], -&m[b][a]);
            }
        }
        assert_eq!(m[0][2], q(-12, 1));
        let s = serde_json::to_string(&t).unwrap();
        let back: BracketTensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(s.contains(r#"{"a":0,"b":2,"q":[{"u":1,"v":3,"val":"-3/2"}]}"#));
    }

    #[test]
    fn cancellation_removes_entries() {
        let mut t = BracketTensor::zero(Parity::Odd, 1, 3);
        t.add_coeff(0, 1, 2, 2, &q(1, 1));
        let u = t.add_scaled(&t, &q(-1, 1));
        assert!(u.is_zero());
        assert_eq!(u.nnz(), 0);
    }
}
