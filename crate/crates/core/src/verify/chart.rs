use std::collections::BTreeMap;
use std::fmt;

use crate::bracket::{BracketTensor, QuadForm};
use crate::exact::{Monomial, Poly, Rational, Vars};

/// Affine chart `φ_m = 1` of a projectivized quadratic bracket.
///
/// Chart variables are the remaining coordinates `u_a = φ_a/φ_m`, kept in
/// increasing order of `a` and named `u{a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartBracket {
    pub chart: usize,
    pub n: usize,
    vars: Vars,
    coords: Vec<usize>,
    funcs: BTreeMap<(usize, usize), Poly>,
}

impl ChartBracket {
    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Global coordinate index of each chart variable.
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    /// Chart-local position of global coordinate `a`.
    pub fn local(&self, a: usize) -> Option<usize> {
        self.coords.binary_search(&a).ok()
    }

    /// `{u_a, u_b}` for chart-local indices.
    pub fn get_local(&self, i: usize, j: usize) -> Poly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self
                .funcs
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Poly::zero(self.vars.clone())),
            std::cmp::Ordering::Greater => -self.get_local(j, i),
            std::cmp::Ordering::Equal => Poly::zero(self.vars.clone()),
        }
    }

    /// `{u_a, u_b}` for global indices `a, b ≠ m`.
    pub fn get(&self, a: usize, b: usize) -> Poly {
        let (i, j) = (
            self.local(a).expect("chart index"),
            self.local(b).expect("chart index"),
        );
        self.get_local(i, j)
    }

    /// Dense antisymmetric table over chart-local indices.
    pub fn table(&self) -> Vec<Vec<Poly>> {
        let d = self.coords.len();
        (0..d)
            .map(|i| (0..d).map(|j| self.get_local(i, j)).collect())
            .collect()
    }

    /// Nonzero structure functions keyed by local `(i, j)`, `i < j`.
    pub fn functions(&self) -> impl Iterator<Item = (&(usize, usize), &Poly)> {
        self.funcs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.funcs.is_empty()
    }
}

/// `π(φ)` restricted to `φ_m = 1`, as a polynomial in the chart variables.
fn dehomogenize(
    form: Option<&QuadForm>,
    sign: &Rational,
    m: usize,
    vars: &Vars,
    coords: &[usize],
) -> Poly {
    let mut p = Poly::zero(vars.clone());
    let Some(form) = form else { return p };
    let d = coords.len();
    for (&(u, v), c) in form {
        let mut e = vec![0u16; d];
        for w in [u, v] {
            if w != m {
                e[coords.binary_search(&w).unwrap()] += 1;
            }
        }
        p.add_term(Monomial::from_exps(&e), c * sign);
    }
    p
}

fn pi_at(t: &BracketTensor, a: usize, b: usize, m: usize, vars: &Vars, coords: &[usize]) -> Poly {
    if a == b {
        return Poly::zero(vars.clone());
    }
    let sign = if a < b {
        Rational::one()
    } else {
        -Rational::one()
    };
    dehomogenize(t.form(a.min(b), a.max(b)), &sign, m, vars, coords)
}

/// `{u_a, u_b} = π_ab(u,1) − u_a·π_mb(u,1) + u_b·π_ma(u,1)`.
pub fn descend_to_chart(t: &BracketTensor, m: usize) -> ChartBracket {
    assert!(m < t.n, "chart index {m} out of range for n = {}", t.n);
    let coords: Vec<usize> = (0..t.n).filter(|&a| a != m).collect();
    let vars = Vars::new(&coords.iter().map(|a| format!("u{a}")).collect::<Vec<_>>());
    let pm: Vec<Poly> = (0..t.n)
        .map(|b| pi_at(t, m, b, m, &vars, &coords))
        .collect();
    let mut funcs = BTreeMap::new();
    for (i, &a) in coords.iter().enumerate() {
        for (j, &b) in coords.iter().enumerate().skip(i + 1) {
            let mut f = pi_at(t, a, b, m, &vars, &coords);
            f.add_product(&-Poly::var(vars.clone(), i), &pm[b]);
            f.add_product(&Poly::var(vars.clone(), j), &pm[a]);
            if !f.is_zero() {
                funcs.insert((i, j), f);
            }
        }
    }
    ChartBracket {
        chart: m,
        n: t.n,
        vars,
        coords,
        funcs,
    }
}

/// Variables `φ0, …, φ{n−1}` of the cone.
pub fn cone_vars(n: usize) -> Vars {
    Vars::indexed("phi", n)
}

/// The linear form `Σ c_a·φ_a`.
pub fn linear_form(vars: &Vars, coeffs: &[Rational]) -> Poly {
    assert_eq!(vars.len(), coeffs.len());
    let mut p = Poly::zero(vars.clone());
    for (i, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(vars.len(), i), c.clone());
    }
    p
}

/// Unit coordinate form `φ_a` as a coefficient vector.
pub fn coordinate(n: usize, a: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[a] = Rational::one();
    v
}

/// `{f, g} = Σ f_a·g_b·π_ab(φ)` for linear forms `f`, `g`.
pub fn linear_bracket(t: &BracketTensor, f: &[Rational], g: &[Rational]) -> Poly {
    let vars = cone_vars(t.n);
    let mut out = Poly::zero(vars.clone());
    for ((a, b), form) in t.entries() {
        let c = &(&f[*a] * &g[*b]) - &(&f[*b] * &g[*a]);
        if c.is_zero() {
            continue;
        }
        for (&(u, v), val) in form {
            let mut e = vec![0u16; t.n];
            e[u] += 1;
            e[v] += 1;
            out.add_term(Monomial::from_exps(&e), &c * val);
        }
    }
    out
}

/// Quotient of two polynomials on the cone, compared by cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RationalFunction { num, den };
        r.normalize();
        r
    }

    /// Scale so that the leading denominator coefficient is 1.
    fn normalize(&mut self) {
        let lead = self
            .den
            .terms()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return RationalFunction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        RationalFunction::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        (!d.is_zero()).then(|| &self.num.eval(point) / &d)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{f/h, g/l}` for linear forms, as a single fraction over `h²·l²`:
/// `(h·l·{f,g} − g·h·{f,l} − f·l·{h,g} + f·g·{h,l}) / (h²·l²)`.
pub fn ratio_bracket(
    t: &BracketTensor,
    f_num: &[Rational],
    f_den: &[Rational],
    g_num: &[Rational],
    g_den: &[Rational],
) -> RationalFunction {
    for v in [f_num, f_den, g_num, g_den] {
        assert_eq!(v.len(), t.n, "linear form has wrong length");
    }
    let vars = cone_vars(t.n);
    let (f, h) = (linear_form(&vars, f_num), linear_form(&vars, f_den));
    let (g, l) = (linear_form(&vars, g_num), linear_form(&vars, g_den));
    assert!(
        !h.is_zero() && !l.is_zero(),
        "denominator forms must be nonzero"
    );
    let mut num = &(&h * &l) * &linear_bracket(t, f_num, g_num);
    num.add_product(&-(&g * &h), &linear_bracket(t, f_num, g_den));
    num.add_product(&-(&f * &l), &linear_bracket(t, f_den, g_num));
    num.add_product(&(&f * &g), &linear_bracket(t, f_den, g_den));
    let hl = &h * &l;
    RationalFunction::new(num, &hl * &hl)
}

/// `(c, [(var, exponent)], denominator power)`.
pub type MonomialTerm = (Rational, Vec<(usize, u16)>, u16);

/// `Σ c_i·Π_j φ_j^{e_ij} / φ_den^{d_i}`, handy for writing expected chart formulas.
pub fn monomial_sum(n: usize, den: usize, terms: &[MonomialTerm]) -> RationalFunction {
    let vars = cone_vars(n);
    let top = terms.iter().map(|t| t.2).max().unwrap_or(0);
    let mut num = Poly::zero(vars.clone());
    for (c, mono, d) in terms {
        let mut e = vec![0u16; n];
        for &(i, p) in mono {
            e[i] += p;
        }
        e[den] += top - d;
        num.add_term(Monomial::from_exps(&e), c.clone());
    }
    let mut de = vec![0u16; n];
    de[den] = top;
    RationalFunction::new(
        num,
        Poly::from_terms(vars, [(Monomial::from_exps(&de), Rational::one())]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Parity;
    use crate::exact::q;

    fn sample_tensor() -> BracketTensor {
        let mut t = BracketTensor::zero(Parity::Even, 2, 4);
        t.add_coeff(0, 1, 2, 3, &q(1, 1));
        t.add_coeff(0, 2, 0, 1, &q(-2, 1));
        t.add_coeff(1, 3, 3, 3, &q(3, 2));
        t.add_coeff(2, 3, 0, 0, &q(5, 1));
        t
    }

    #[test]
    fn zero_tensor_descends_to_zero() {
        let t = BracketTensor::zero(Parity::Odd, 1, 3);
        for m in 0..3 {
            assert!(descend_to_chart(&t, m).is_zero());
        }
    }

    #[test]
    fn chart_matches_ratio_bracket() {
        let t = sample_tensor();
        for m in 0..4 {
            let ch = descend_to_chart(&t, m);
            let others: Vec<usize> = (0..4).filter(|&a| a != m).collect();
            let (a, b) = (others[0], others[2]);
            let r = ratio_bracket(
                &t,
                &coordinate(4, a),
                &coordinate(4, m),
                &coordinate(4, b),
                &coordinate(4, m),
            );
            let point = [q(2, 1), q(-1, 3), q(5, 7), q(1, 2)];
            let u: Vec<Rational> = others.iter().map(|&i| &point[i] / &point[m]).collect();
            assert_eq!(r.eval(&point).unwrap(), ch.get(a, b).eval(&u));
        }
    }

    #[test]
    fn ratio_bracket_is_antisymmetric() {
        let t = sample_tensor();
        let f = [q(1, 1), q(2, 1), q(0, 1), q(-1, 1)];
        let h = [q(0, 1), q(1, 1), q(1, 1), q(3, 1)];
        assert!(ratio_bracket(&t, &f, &h, &f, &h).is_zero());
        let g = coordinate(4, 2);
        let l = coordinate(4, 0);
        assert_eq!(
            ratio_bracket(&t, &f, &h, &g, &l),
            ratio_bracket(&t, &g, &l, &f, &h).neg()
        );
    }

    #[test]
    fn rational_function_equality_is_cross_multiplication() {
        let a = monomial_sum(3, 2, &[(q(1, 1), vec![(0, 1)], 1)]);
        let vars = cone_vars(3);
        let x0 = Poly::var(vars.clone(), 0);
        let x2 = Poly::var(vars, 2);
        let b = RationalFunction::new(&x0 * &x2, &x2 * &x2);
        assert_eq!(a, b);
        assert_ne!(a, b.neg());
    }
}
