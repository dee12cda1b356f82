use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_positive_definite, vdot_polynomial};
use crate::error::{Result, SailError};
use crate::poly::{CompiledPolynomial, PolyVectorField};
use crate::stability::halton;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    /// Shell directions per candidate level (split into antipodal pairs).
    pub n_samples: usize,
    /// Worst directions polished by local search.
    pub refinements: usize,
    /// Relative bracket width at which bisection stops.
    pub rel_tol: f64,
    pub rho_upper: f64,
    pub rho_min: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            n_samples: 20_000,
            refinements: 50,
            rel_tol: 1e-6,
            rho_upper: 1e6,
            rho_min: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoaMethod {
    Sampling,
    SosSdp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoaStatus {
    /// No sampled point refutes the level. This is a refutation-complete
    /// estimate in the sample limit, not a formal proof.
    Estimated,
    /// The configured upper bound survived; the set may be unbounded.
    PossiblyUnbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoaEstimate {
    pub p: DMatrix<f64>,
    pub rho: f64,
    pub method: RoaMethod,
    pub status: RoaStatus,
    pub n_samples: usize,
    /// Smallest sampled critical level divided by `rho`, minus one.
    pub margin: f64,
    /// Shell point (on `V = 1`) whose ray first reaches `V_dot = 0`.
    pub worst_direction: Vec<f64>,
}

impl RoaEstimate {
    pub fn value(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        (v.transpose() * &self.p * &v)[(0, 0)]
    }
}

/// Along the ray `x = s y` with `V(y) = 1`, `V_dot = s^2 (a2 + a3 s + a4 s^2)`.
/// Returns the first level `s^2` at which `V_dot >= 0`, or infinity.
pub fn critical_level(a2: f64, a3: f64, a4: f64) -> f64 {
    if !(a2 < 0.0) {
        return 0.0;
    }
    let roots: Vec<f64> = if a4 == 0.0 {
        if a3 == 0.0 {
            vec![]
        } else {
            vec![-a2 / a3]
        }
    } else {
        let disc = a3 * a3 - 4.0 * a4 * a2;
        if disc < 0.0 {
            vec![]
        } else {
            let q = -0.5 * (a3 + a3.signum() * disc.sqrt());
            if q == 0.0 {
                vec![(-a2 / a4).sqrt()]
            } else {
                vec![q / a4, a2 / q]
            }
        }
    };
    roots
        .into_iter()
        .filter(|&s| s > 0.0 && s.is_finite())
        .map(|s| s * s)
        .fold(f64::INFINITY, f64::min)
}

struct RayModel {
    parts: [CompiledPolynomial; 3],
    /// `P^{-1/2}`: unit sphere to the `V = 1` shell.
    to_shell: DMatrix<f64>,
}

impl RayModel {
    fn shell_point(&self, u: &[f64]) -> Vec<f64> {
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u = DVector::from_iterator(u.len(), u.iter().map(|v| v / norm));
        (&self.to_shell * u).as_slice().to_vec()
    }

    fn level(&self, u: &[f64]) -> f64 {
        let y = self.shell_point(u);
        critical_level(self.parts[0].eval(&y), self.parts[1].eval(&y), self.parts[2].eval(&y))
    }
}

/// Gaussian-normalized low-discrepancy directions on the unit sphere.
fn sphere_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    let pairs = n.div_ceil(2);
    (1..=count)
        .map(|k| {
            let h = halton(k, 2 * pairs);
            let mut z = Vec::with_capacity(2 * pairs);
            for p in 0..pairs {
                // Box-Muller; Halton coordinates are never exactly 0
                let r = (-2.0 * h[2 * p].ln()).sqrt();
                let t = std::f64::consts::TAU * h[2 * p + 1];
                z.push(r * t.cos());
                z.push(r * t.sin());
            }
            z.truncate(n);
            z
        })
        .collect()
}

/// Projected descent on the sphere toward a smaller critical level.
fn refine(model: &RayModel, start: &[f64], start_level: f64) -> (Vec<f64>, f64) {
    let n = start.len();
    let normalize = |v: &mut Vec<f64>| {
        let s = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= s);
    };
    let mut u = start.to_vec();
    normalize(&mut u);
    let mut level = start_level;
    let mut step = 0.1;
    for _ in 0..60 {
        if !level.is_finite() || step < 1e-10 {
            break;
        }
        let h = 1e-6;
        let grad: Vec<f64> = (0..n)
            .map(|i| {
                let mut up = u.clone();
                up[i] += h;
                let mut dn = u.clone();
                dn[i] -= h;
                (model.level(&up) - model.level(&dn)) / (2.0 * h)
            })
            .collect();
        if grad.iter().any(|g| !g.is_finite()) {
            break;
        }
        // tangent component only
        let radial: f64 = grad.iter().zip(&u).map(|(g, a)| g * a).sum();
        let tangent: Vec<f64> = grad.iter().zip(&u).map(|(g, a)| g - radial * a).collect();
        let gnorm = tangent.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            break;
        }
        let mut improved = false;
        while step > 1e-10 {
            let mut trial: Vec<f64> = u.iter().zip(&tangent).map(|(a, g)| a - step * g / gnorm).collect();
            normalize(&mut trial);
            let l = model.level(&trial);
            if l < level {
                u = trial;
                level = l;
                step *= 1.5;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (u, level)
}

/// Largest level `rho` such that no sampled ray meets `V_dot >= 0` inside
/// `{V <= rho}`, found by log-space bisection.
///
/// Each candidate is tested on every sampled ray at every level up to the
/// candidate (the ray polynomial is solved exactly), which makes the
/// predicate monotone in `rho`.
pub fn estimate_rho_sampling(p: &DMatrix<f64>, f: &PolyVectorField, options: &SamplingOptions) -> Result<RoaEstimate> {
    check_positive_definite(p)?;
    if options.n_samples < 2 {
        return Err(SailError::invalid("n_samples", "need at least 2"));
    }
    if !(options.rho_min > 0.0 && options.rho_upper > options.rho_min) {
        return Err(SailError::invalid("rho bounds", "need 0 < rho_min < rho_upper"));
    }
    if !(options.rel_tol > 0.0) {
        return Err(SailError::invalid("rel_tol", "must be positive"));
    }
    let vdot = vdot_polynomial(p, f)?;
    if !vdot.is_empty() && (vdot.min_degree() < 2 || vdot.degree() > 4) {
        return Err(SailError::invalid(
            "dynamics",
            "field must vanish at the origin and have degree at most 3",
        ));
    }
    let n = f.n_vars();
    let eig = p.clone().symmetric_eigen();
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let model = RayModel {
        parts: [2, 3, 4].map(|d| vdot.homogeneous(d).compile()),
        to_shell: &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose(),
    };

    let half = options.n_samples.div_ceil(2);
    let dirs: Vec<Vec<f64>> = sphere_directions(n, half)
        .into_iter()
        .flat_map(|u| {
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            [u, neg]
        })
        .take(options.n_samples)
        .collect();
    let mut levels: Vec<f64> = dirs.par_iter().map(|u| model.level(u)).collect();

    let mut order: Vec<usize> = (0..dirs.len()).collect();
    order.sort_by(|&a, &b| levels[a].total_cmp(&levels[b]).then(a.cmp(&b)));
    let mut extra = Vec::new();
    let refined: Vec<(Vec<f64>, f64)> = order
        .iter()
        .take(options.refinements)
        .filter(|&&k| levels[k].is_finite() && levels[k] > 0.0)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&k| refine(&model, &dirs[k], levels[k]))
        .collect();
    for (u, l) in refined {
        extra.push(u);
        levels.push(l);
    }
    let all_dirs: Vec<&Vec<f64>> = dirs.iter().chain(extra.iter()).collect();

    let passes = |rho: f64| levels.iter().all(|&l| l > rho);
    if !passes(options.rho_min) {
        return Err(SailError::Certification(format!(
            "V_dot >= 0 already at level {:e}; the quadratic V does not decrease near the origin",
            options.rho_min
        )));
    }
    let (worst_k, worst) = levels
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(k, &l)| (k, l))
        .unwrap_or((0, f64::INFINITY));
    let worst_direction = model.shell_point(all_dirs[worst_k]);

    if passes(options.rho_upper) {
        return Ok(RoaEstimate {
            p: p.clone(),
            rho: options.rho_upper,
            method: RoaMethod::Sampling,
            status: RoaStatus::PossiblyUnbounded,
            n_samples: levels.len(),
            margin: worst / options.rho_upper - 1.0,
            worst_direction,
        });
    }
    let (mut lo, mut hi) = (options.rho_min.ln(), options.rho_upper.ln());
    while hi - lo > options.rel_tol.ln_1p() {
        let mid = 0.5 * (lo + hi);
        if passes(mid.exp()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = lo.exp();
    Ok(RoaEstimate {
        p: p.clone(),
        rho,
        method: RoaMethod::Sampling,
        status: RoaStatus::Estimated,
        n_samples: levels.len(),
        margin: worst / rho - 1.0,
        worst_direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Monomial, Polynomial};
    use crate::stability::solve_lyapunov;

    fn cubic_1d() -> PolyVectorField {
        PolyVectorField::new(vec![Polynomial::from_terms(
            1,
            [(Monomial(vec![1]), -1.0), (Monomial(vec![3]), 1.0)],
        )])
    }

    fn van_der_pol_reversed() -> PolyVectorField {
        let m = |a, b| Monomial(vec![a, b]);
        PolyVectorField::new(vec![
            Polynomial::from_terms(2, [(m(0, 1), -1.0)]),
            Polynomial::from_terms(2, [(m(1, 0), 1.0), (m(0, 1), -1.0), (m(2, 1), 1.0)]),
        ])
    }

    #[test]
    fn critical_level_cases() {
        assert_eq!(critical_level(0.0, 1.0, 1.0), 0.0);
        assert_eq!(critical_level(-2.0, 0.0, 2.0), 1.0);
        assert_eq!(critical_level(-1.0, 0.0, 0.0), f64::INFINITY);
        assert_eq!(critical_level(-1.0, 0.0, -1.0), f64::INFINITY);
        assert!((critical_level(-1.0, 2.0, 0.0) - 0.25).abs() < 1e-15);
        // -1 + 3s - s^2: first root (3 - sqrt 5)/2
        let s = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((critical_level(-1.0, 3.0, -1.0) - s * s).abs() < 1e-14);
    }

    #[test]
    fn one_dimensional_cubic_gives_unit_level() {
        let est = estimate_rho_sampling(&DMatrix::identity(1, 1), &cubic_1d(), &SamplingOptions::default()).unwrap();
        assert_eq!(est.status, RoaStatus::Estimated);
        assert!((est.rho - 1.0).abs() < 1e-2, "rho = {}", est.rho);
    }

    #[test]
    fn linear_field_is_possibly_unbounded() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 0.0, -2.0]);
        let p = solve_lyapunov(&a, &DMatrix::identity(2, 2)).unwrap().p;
        let est = estimate_rho_sampling(&p, &PolyVectorField::linear(&a), &SamplingOptions::default()).unwrap();
        assert_eq!(est.status, RoaStatus::PossiblyUnbounded);
        assert_eq!(est.rho, 1e6);
    }

    #[test]
    fn unstable_origin_fails_certification() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let r = estimate_rho_sampling(&DMatrix::identity(1, 1), &PolyVectorField::linear(&a), &SamplingOptions::default());
        assert!(matches!(r, Err(SailError::Certification(_))));
    }

    #[test]
    fn rejects_indefinite_p() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(estimate_rho_sampling(&p, &van_der_pol_reversed(), &SamplingOptions::default()).is_err());
    }

    #[test]
    fn invariant_to_time_rescaling() {
        let f = van_der_pol_reversed();
        let p = solve_lyapunov(&f.linear_part(), &DMatrix::identity(2, 2)).unwrap().p;
        let opts = SamplingOptions {
            n_samples: 4000,
            ..Default::default()
        };
        let a = estimate_rho_sampling(&p, &f, &opts).unwrap().rho;
        let b = estimate_rho_sampling(&p, &f.scale(3.7), &opts).unwrap().rho;
        assert!((a - b).abs() / a < 1e-5);
    }

    #[test]
    fn no_refuted_shell_point_at_estimate() {
        let f = van_der_pol_reversed();
        let p = solve_lyapunov(&f.linear_part(), &DMatrix::identity(2, 2)).unwrap().p;
        let est = estimate_rho_sampling(&p, &f, &SamplingOptions::default()).unwrap();
        let vdot = vdot_polynomial(&p, &f).unwrap();
        let chol = p.clone().cholesky().unwrap();
        for k in 0..2000 {
            let t = k as f64 / 2000.0 * std::f64::consts::TAU;
            // x with x^T P x = rho
            let z = DVector::from_vec(vec![t.cos(), t.sin()]) * est.rho.sqrt();
            let x = chol.l().transpose().solve_upper_triangular(&z).unwrap();
            assert!(vdot.eval(x.as_slice()) < 0.0);
        }
    }
}
