use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;

use super::sdpa::{SdpaEntry, SdpaProblem};
use super::vdot_polynomial;
use crate::error::{Result, SailError};
use crate::poly::{monomials, Monomial, PolyVectorField, Polynomial};

/// One coefficient-matching equality of the SOS constraint
///
/// `sum_{b_i + b_j = alpha} G_ij + rho p_alpha - sum_k s_k (m_k V_dot)_alpha = (p V)_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct SosEquation {
    pub monomial: Monomial,
    /// Right-hand side `(p V)_alpha`.
    pub constant: f64,
    /// Coefficient of `rho`, i.e. `p_alpha`.
    pub rho: f64,
    /// `(k, -(m_k V_dot)_alpha)` for multiplier coefficients `s_k`.
    pub multiplier: Vec<(usize, f64)>,
    /// Upper-triangle Gram positions `(i, j)`, `i <= j`, each with weight one.
    pub gram: Vec<(usize, usize)>,
}

/// The S-procedure program
///
/// maximize `rho` subject to `p (V - rho) + s V_dot` being SOS,
///
/// with `p = x^T x` and `s` a free polynomial over `multiplier_basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct SosProgram {
    pub n_vars: usize,
    pub v: Polynomial,
    pub vdot: Polynomial,
    pub p: Polynomial,
    pub multiplier_basis: Vec<Monomial>,
    pub gram_basis: Vec<Monomial>,
    pub equations: Vec<SosEquation>,
    /// Set when the constraint has odd top or bottom degree and the Gram
    /// basis bounds had to be rounded.
    pub basis_rounding: Option<String>,
}

impl SosProgram {
    /// Degree range `(lowest, highest)` of the constraint polynomial.
    pub fn constraint_degrees(&self) -> (u32, u32) {
        degree_span(&self.p, &self.v, &self.vdot, &self.multiplier_basis)
    }

    /// Largest equation residual for a candidate `(rho, s, G)`.
    pub fn residual(&self, rho: f64, s: &[f64], gram: &DMatrix<f64>) -> f64 {
        self.equations
            .iter()
            .map(|eq| {
                let g: f64 = eq
                    .gram
                    .iter()
                    .map(|&(i, j)| if i == j { gram[(i, i)] } else { gram[(i, j)] + gram[(j, i)] })
                    .sum();
                let m: f64 = eq.multiplier.iter().map(|&(k, c)| c * s[k]).sum();
                (g + rho * eq.rho + m - eq.constant).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Standard-form SDP: maximize `F0 . Y` subject to `F_i . Y = c_i`,
    /// `Y` block-diagonal PSD.
    ///
    /// Block 1 is the Gram matrix. Block 2 is a nonnegative diagonal holding
    /// the free scalars split as `rho = y1 - y2`, `s_k = y(3+2k) - y(4+2k)`.
    pub fn to_sdpa(&self) -> Result<SdpaProblem> {
        if self.equations.is_empty() || self.gram_basis.is_empty() {
            return Err(SailError::Assembly("empty program".into()));
        }
        let n_lp = 2 * (1 + self.multiplier_basis.len());
        let mut entries = vec![
            SdpaEntry { mat: 0, block: 2, i: 1, j: 1, value: 1.0 },
            SdpaEntry { mat: 0, block: 2, i: 2, j: 2, value: -1.0 },
        ];
        for (row, eq) in self.equations.iter().enumerate() {
            let mat = row + 1;
            for &(i, j) in &eq.gram {
                entries.push(SdpaEntry { mat, block: 1, i: i + 1, j: j + 1, value: 1.0 });
            }
            if eq.rho != 0.0 {
                entries.push(SdpaEntry { mat, block: 2, i: 1, j: 1, value: eq.rho });
                entries.push(SdpaEntry { mat, block: 2, i: 2, j: 2, value: -eq.rho });
            }
            for &(k, c) in &eq.multiplier {
                let plus = 3 + 2 * k;
                entries.push(SdpaEntry { mat, block: 2, i: plus, j: plus, value: c });
                entries.push(SdpaEntry { mat, block: 2, i: plus + 1, j: plus + 1, value: -c });
            }
        }
        entries.sort_by_key(|e| (e.mat, e.block, e.i, e.j));
        Ok(SdpaProblem {
            comments: vec![
                format!(
                    "S-procedure ROA program: {} vars, Gram basis {}, multiplier basis {}",
                    self.n_vars,
                    self.gram_basis.len(),
                    self.multiplier_basis.len()
                ),
                "maximize F0.Y; rho = Y2[1,1] - Y2[2,2]".into(),
            ],
            m: self.equations.len(),
            block_sizes: vec![self.gram_basis.len() as i64, -(n_lp as i64)],
            c: self.equations.iter().map(|e| e.constant).collect(),
            entries,
        })
    }
}

fn degree_span(p: &Polynomial, v: &Polynomial, vdot: &Polynomial, mult: &[Monomial]) -> (u32, u32) {
    let mut lo = p.min_degree();
    let mut hi = p.degree() + v.degree();
    lo = lo.min(p.min_degree() + v.min_degree());
    if !vdot.is_empty() && !mult.is_empty() {
        let mlo = mult.iter().map(Monomial::degree).min().unwrap_or(0);
        let mhi = mult.iter().map(Monomial::degree).max().unwrap_or(0);
        lo = lo.min(mlo + vdot.min_degree());
        hi = hi.max(mhi + vdot.degree());
    }
    (lo, hi)
}

/// Builds the SOS program for `V = x^T P x` and dynamics `f`, with a free
/// multiplier of total degree at most `multiplier_degree`.
pub fn assemble_sos(p_mat: &DMatrix<f64>, f: &PolyVectorField, multiplier_degree: u32) -> Result<SosProgram> {
    let n = f.n_vars();
    if n == 0 {
        return Err(SailError::Assembly("no state variables".into()));
    }
    if f.degree() > 3 {
        return Err(SailError::Assembly(format!("field degree {} exceeds 3", f.degree())));
    }
    super::check_positive_definite(p_mat)?;
    let v = Polynomial::quadratic_form(p_mat);
    let vdot = vdot_polynomial(p_mat, f)?.prune(0.0);
    let p = Polynomial::quadratic_form(&DMatrix::identity(n, n));
    let multiplier_basis = monomials(n, 0, multiplier_degree);

    let (lo, hi) = degree_span(&p, &v, &vdot, &multiplier_basis);
    let mut basis_rounding = None;
    if lo % 2 == 1 || hi % 2 == 1 {
        basis_rounding = Some(format!(
            "constraint degrees {lo}..{hi} are not both even; Gram basis spans degrees {}..{}",
            lo / 2,
            hi.div_ceil(2)
        ));
    }
    let gram_basis = monomials(n, lo / 2, hi.div_ceil(2));
    let unique: BTreeSet<&Monomial> = gram_basis.iter().collect();
    if unique.len() != gram_basis.len() {
        return Err(SailError::Assembly("duplicate monomial in Gram basis".into()));
    }

    #[derive(Default)]
    struct Row {
        constant: f64,
        rho: f64,
        multiplier: BTreeMap<usize, f64>,
        gram: Vec<(usize, usize)>,
    }
    let mut rows: BTreeMap<Monomial, Row> = BTreeMap::new();
    for i in 0..gram_basis.len() {
        for j in i..gram_basis.len() {
            rows.entry(gram_basis[i].mul(&gram_basis[j]))
                .or_default()
                .gram
                .push((i, j));
        }
    }
    for (m, c) in p.mul(&v).terms() {
        rows.entry(m.clone()).or_default().constant += c;
    }
    for (m, c) in p.terms() {
        rows.entry(m.clone()).or_default().rho += c;
    }
    for (k, mk) in multiplier_basis.iter().enumerate() {
        for (m, c) in vdot.terms() {
            *rows.entry(m.mul(mk)).or_default().multiplier.entry(k).or_default() -= c;
        }
    }

    let equations = rows
        .into_iter()
        .map(|(monomial, r)| SosEquation {
            monomial,
            constant: r.constant,
            rho: r.rho,
            multiplier: r.multiplier.into_iter().filter(|&(_, c)| c != 0.0).collect(),
            gram: r.gram,
        })
        .collect();

    Ok(SosProgram {
        n_vars: n,
        v,
        vdot,
        p,
        multiplier_basis,
        gram_basis,
        equations,
        basis_rounding,
    })
}
