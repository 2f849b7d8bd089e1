use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bracket::BracketTensor;
use crate::exact::{Monomial, Poly, Vars};

use super::chart::{cone_vars, descend_to_chart, ChartBracket};

/// Alternating polynomial multivector; coefficients stored on strictly
/// increasing index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector {
    pub degree: usize,
    vars: Vars,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

impl Multivector {
    pub fn zero(degree: usize, vars: Vars) -> Self {
        Multivector {
            degree,
            vars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Coefficient on `∂_{i₁}∧…∧∂_{i_p}` in any index order.
    pub fn get(&self, idx: &[usize]) -> Poly {
        assert_eq!(idx.len(), self.degree);
        match sort_with_sign(idx) {
            None => Poly::zero(self.vars.clone()),
            Some((key, odd)) => {
                let p = self
                    .coeffs
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(self.vars.clone()));
                if odd {
                    -p
                } else {
                    p
                }
            }
        }
    }

    pub fn set(&mut self, idx: &[usize], p: Poly) {
        assert_eq!(idx.len(), self.degree);
        let Some((key, odd)) = sort_with_sign(idx) else {
            assert!(p.is_zero(), "repeated index with nonzero coefficient");
            return;
        };
        let p = if odd { -p } else { p };
        if p.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients on sorted index tuples.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.coeffs.iter()
    }

    pub fn first_nonzero(&self) -> Option<(&Vec<usize>, &Poly)> {
        self.coeffs.iter().next()
    }
}

/// Dense antisymmetric table of brackets `{y_i, y_j}` with all first derivatives.
struct Table {
    f: Vec<Vec<Poly>>,
    df: Vec<Vec<Vec<Poly>>>,
}

impl Table {
    fn new(f: Vec<Vec<Poly>>) -> Self {
        let d = f.len();
        let df = f
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| (0..d).map(|k| p.derivative(k)).collect())
                    .collect()
            })
            .collect();
        Table { f, df }
    }
}

/// `Σ_cyc Σ_d f_{ad}·∂_d g_{bc}` over sorted triples.
fn cyclic_sum(vars: &Vars, f: &Table, g: &Table) -> Multivector {
    let d = f.f.len();
    let mut out = Multivector::zero(3, vars.clone());
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let mut acc = Poly::zero(vars.clone());
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    for e in 0..d {
                        if !f.f[x][e].is_zero() && !g.df[y][z][e].is_zero() {
                            acc.add_product(&f.f[x][e], &g.df[y][z][e]);
                        }
                    }
                }
                out.set(&[a, b, c], acc);
            }
        }
    }
    out
}

fn jacobiator_table(vars: &Vars, f: Vec<Vec<Poly>>) -> Multivector {
    let t = Table::new(f);
    cyclic_sum(vars, &t, &t)
}

/// `J(u_a,u_b,u_c) = {u_a,{u_b,u_c}} + {u_b,{u_c,u_a}} + {u_c,{u_a,u_b}}`, indexed by
/// chart-local positions.
pub fn jacobiator(cb: &ChartBracket) -> Multivector {
    jacobiator_table(cb.vars(), cb.table())
}

/// The part of `J(Π₁ + Π₂)` bilinear in the two brackets.
pub fn mixed_jacobiator(c1: &ChartBracket, c2: &ChartBracket) -> Multivector {
    assert_eq!(c1.coords(), c2.coords(), "charts differ");
    let vars = c1.vars();
    let (t1, t2) = (Table::new(c1.table()), Table::new(c2.table()));
    let (a, b) = (cyclic_sum(vars, &t1, &t2), cyclic_sum(vars, &t2, &t1));
    let mut out = a;
    for (k, p) in b.entries() {
        let sum = &out.get(k) + p;
        out.set(k, sum);
    }
    out
}

/// Jacobiator of the quadratic lift itself, `{φ_a, φ_b} = π_ab(φ)` on the cone.
pub fn cone_jacobiator(t: &BracketTensor) -> Multivector {
    let vars = cone_vars(t.n);
    let n = t.n;
    let mut f = vec![vec![Poly::zero(vars.clone()); n]; n];
    for (&(a, b), form) in t.entries() {
        let mut p = Poly::zero(vars.clone());
        for (&(u, v), c) in form {
            let mut e = vec![0u16; n];
            e[u] += 1;
            e[v] += 1;
            p.add_term(Monomial::from_exps(&e), c.clone());
        }
        f[b][a] = -&p;
        f[a][b] = p;
    }
    jacobiator_table(&vars, f)
}

/// First nonzero Jacobiator entry found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiWitness {
    pub chart: usize,
    /// Global coordinate indices.
    pub triple: [usize; 3],
    pub value: String,
}

fn witness_in_chart(t: &BracketTensor, m: usize) -> Option<JacobiWitness> {
    let cb = descend_to_chart(t, m);
    let j = jacobiator(&cb);
    j.first_nonzero().map(|(k, p)| JacobiWitness {
        chart: m,
        triple: [cb.coords()[k[0]], cb.coords()[k[1]], cb.coords()[k[2]]],
        value: p.to_string(),
    })
}

/// Chart Jacobiator in every chart; `None` means the bracket is Poisson.
pub fn check_jacobi(t: &BracketTensor) -> Option<JacobiWitness> {
    let found: Vec<Option<JacobiWitness>> = (0..t.n)
        .into_par_iter()
        .map(|m| witness_in_chart(t, m))
        .collect();
    found.into_iter().flatten().next()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatReport {
    pub compatible: bool,
    pub witness: Option<JacobiWitness>,
}

/// Whether `T₁ + T₂` satisfies Jacobi in every chart.
pub fn compatibility_check(t1: &BracketTensor, t2: &BracketTensor) -> CompatReport {
    assert_eq!(t1.n, t2.n, "dimension mismatch");
    let sum = t1.add_scaled(t2, &crate::exact::Rational::one());
    let witness = check_jacobi(&sum);
    CompatReport {
        compatible: witness.is_none(),
        witness,
    }
}

/// Whether the mixed Jacobiator vanishes in every chart.
pub fn mixed_compatibility_check(t1: &BracketTensor, t2: &BracketTensor) -> CompatReport {
    assert_eq!(t1.n, t2.n, "dimension mismatch");
    let found: Vec<Option<JacobiWitness>> = (0..t1.n)
        .into_par_iter()
        .map(|m| {
            let (c1, c2) = (descend_to_chart(t1, m), descend_to_chart(t2, m));
            let j = mixed_jacobiator(&c1, &c2);
            j.first_nonzero().map(|(k, p)| JacobiWitness {
                chart: m,
                triple: [c1.coords()[k[0]], c1.coords()[k[1]], c1.coords()[k[2]]],
                value: p.to_string(),
            })
        })
        .collect();
    let witness = found.into_iter().flatten().next();
    CompatReport {
        compatible: witness.is_none(),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Parity;
    use crate::exact::q;

    #[test]
    fn multivector_signs() {
        let vars = Vars::indexed("u", 4);
        let mut mv = Multivector::zero(3, vars.clone());
        mv.set(&[2, 0, 1], Poly::one(vars.clone()));
        assert_eq!(mv.get(&[0, 1, 2]), Poly::one(vars.clone()));
        assert_eq!(mv.get(&[1, 0, 2]), -Poly::one(vars.clone()));
        assert!(mv.get(&[1, 1, 2]).is_zero());
    }

    #[test]
    fn two_dimensional_charts_have_no_triples() {
        let mut t = BracketTensor::zero(Parity::Odd, 1, 3);
        t.add_coeff(0, 1, 2, 2, &q(7, 1));
        t.add_coeff(1, 2, 0, 1, &q(1, 1));
        assert!(check_jacobi(&t).is_none());
    }

    #[test]
    fn linear_bracket_fails_jacobi() {
        // {u0,u1} = u1, {u1,u2} = u0 in the chart at coordinate 3: J = −u0
        let mut t = BracketTensor::zero(Parity::Even, 2, 4);
        t.add_coeff(0, 1, 1, 3, &q(1, 1));
        t.add_coeff(1, 2, 0, 3, &q(1, 1));
        let w = check_jacobi(&t).expect("not Poisson");
        assert!(w.triple.iter().all(|&a| a != w.chart));
    }

    #[test]
    fn log_canonical_bracket_is_poisson() {
        // {φ_a, φ_b} = c_ab·φ_a·φ_b
        let mut t = BracketTensor::zero(Parity::Even, 2, 4);
        let mut c = 1;
        for a in 0..4 {
            for b in a + 1..4 {
                t.add_coeff(a, b, a, b, &q(c, 1));
                c += 2;
            }
        }
        assert!(cone_jacobiator(&t).is_zero());
        assert!(check_jacobi(&t).is_none());
    }

    #[test]
    fn sum_test_agrees_with_mixed_test_for_poisson_summands() {
        let mut a = BracketTensor::zero(Parity::Even, 2, 4);
        a.add_coeff(0, 1, 0, 1, &q(1, 1));
        let mut b = BracketTensor::zero(Parity::Even, 2, 4);
        b.add_coeff(2, 3, 2, 3, &q(1, 1));
        b.add_coeff(0, 2, 0, 2, &q(3, 1));
        assert!(check_jacobi(&a).is_none());
        let s = compatibility_check(&a, &b);
        let m = mixed_compatibility_check(&a, &b);
        assert_eq!(s.compatible, check_jacobi(&b).is_none() && m.compatible);
    }
}
