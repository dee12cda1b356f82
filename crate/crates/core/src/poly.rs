//! Sparse multivariate polynomials with real coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &v)| v.powi(e as i32))
            .product()
    }
}

/// Graded order: total degree first, then larger leading exponents first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `n_vars` variables with `lo <= degree <= hi`, in graded
/// order.
pub fn monomials(n_vars: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    fn fill(n: usize, left: u32, prefix: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(left as u8);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u8);
            fill(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        if n_vars == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            continue;
        }
        fill(n_vars, d, &mut Vec::with_capacity(n_vars), &mut out);
    }
    out
}

/// Number of monomials of degree at most `d` in `n` variables, `C(n + d, d)`.
pub fn monomial_count(n: usize, d: usize) -> usize {
    (1..=d).fold(1usize, |acc, k| acc * (n + k) / k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: f64) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::one(n_vars), c);
        p
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::var(n_vars, i), 1.0);
        p
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// `x^T M x` for a square matrix given row-major.
    pub fn quadratic_form(m: &nalgebra::DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut p = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mono = Monomial::var(n, i).mul(&Monomial::var(n, j));
                p.add_term(mono, m[(i, j)]);
            }
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn add_term(&mut self, m: Monomial, c: f64) {
        assert_eq!(m.n_vars(), self.n_vars, "monomial arity mismatch");
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            // keep the map free of exact cancellations
            let key = self.terms.iter().find(|(_, v)| **v == 0.0).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).min().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        Polynomial::from_terms(self.n_vars, self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut out = Polynomial::zero(self.n_vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, c * e as f64);
        }
        out
    }

    /// Terms of exactly total degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        Polynomial::from_terms(
            self.n_vars,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), *c)),
        )
    }

    /// Drop terms whose magnitude is at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Polynomial::from_terms(
            self.n_vars,
            self.terms
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(m, c)| (m.clone(), *c)),
        )
    }

    /// Flattened form for repeated evaluation.
    pub fn compile(&self) -> CompiledPolynomial {
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        CompiledPolynomial {
            n_vars: self.n_vars,
            max_exp,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| {
                    let factors = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i as u16, e))
                        .collect();
                    (factors, c)
                })
                .collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Evaluation-friendly polynomial: per term, the list of (variable, power).
#[derive(Debug, Clone)]
pub struct CompiledPolynomial {
    n_vars: usize,
    max_exp: usize,
    terms: Vec<(Vec<(u16, u8)>, f64)>,
}

impl CompiledPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n_vars);
        let stride = self.max_exp + 1;
        let mut pows = vec![1.0; self.n_vars * stride];
        for (i, &v) in x.iter().enumerate() {
            for e in 1..stride {
                pows[i * stride + e] = pows[i * stride + e - 1] * v;
            }
        }
        self.terms
            .iter()
            .map(|(f, c)| {
                f.iter()
                    .fold(*c, |acc, &(i, e)| acc * pows[i as usize * stride + e as usize])
            })
            .sum()
    }
}

/// A polynomial vector field `x_dot = f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField {
    pub components: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        let n = components.len();
        assert!(components.iter().all(|c| c.n_vars() == n), "field must be square");
        PolyVectorField { components }
    }

    /// `f(x) = A x`.
    pub fn linear(a: &nalgebra::DMatrix<f64>) -> Self {
        let n = a.nrows();
        PolyVectorField::new(
            (0..n)
                .map(|i| {
                    Polynomial::from_terms(n, (0..n).map(|j| (Monomial::var(n, j), a[(i, j)])))
                })
                .collect(),
        )
    }

    pub fn n_vars(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Jacobian at the origin.
    pub fn linear_part(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n_vars();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.components[i].coefficient(&Monomial::var(n, j)))
    }

    pub fn scale(&self, k: f64) -> Self {
        PolyVectorField::new(self.components.iter().map(|c| c.scale(k)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(8, 0, 2).len(), 45);
        assert_eq!(monomial_count(8, 2), 45);
        assert_eq!(monomials(8, 0, 3).len(), 165);
        assert_eq!(monomial_count(8, 3), 165);
        assert_eq!(monomials(2, 2, 2).len(), 3);
        assert_eq!(monomials(1, 0, 4).len(), 5);
    }

    #[test]
    fn monomials_are_sorted_and_unique() {
        let ms = monomials(3, 0, 4);
        for w in ms.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn arithmetic_and_derivative() {
        // (1 + x)(x - y) = x - y + x^2 - xy
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = Polynomial::constant(2, 1.0).add(&x).mul(&x.sub(&y));
        assert_eq!(p.len(), 4);
        assert_eq!(p.eval(&[2.0, 3.0]), -3.0);
        let dx = p.derivative(0); // 1 + 2x - y
        assert_eq!(dx.eval(&[2.0, 3.0]), 2.0);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.homogeneous(2).eval(&[2.0, 3.0]), -2.0);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::var(1, 0);
        assert!(x.sub(&x).is_empty());
    }

    #[test]
    fn compiled_matches_direct() {
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let z = Polynomial::var(3, 2);
        let p = x.mul(&x).mul(&y).add(&z.scale(-2.5)).add(&Polynomial::constant(3, 0.7));
        let c = p.compile();
        for pt in [[0.3, -1.2, 2.0], [1.0, 1.0, 1.0], [-0.5, 0.25, 0.0]] {
            assert!((c.eval(&pt) - p.eval(&pt)).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic_form_evaluates() {
        let m = nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let q = Polynomial::quadratic_form(&m);
        // 2x^2 + 2xy + 3y^2 at (1, -1) = 3
        assert_eq!(q.eval(&[1.0, -1.0]), 3.0);
    }
}
