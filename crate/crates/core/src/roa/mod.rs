//! Region-of-attraction estimation for a quadratic Lyapunov function
//! `V(x) = x^T P x` over polynomial dynamics.
//!
//! Two backends: a sampling estimator that refutes candidate levels on the
//! ellipsoid shell, and an SOS program assembled for an external SDP solver
//! and written in SDPA sparse format.

mod projection;
mod sampling;
mod sdpa;
mod sos;

pub use projection::{project_ellipsoid, Projection, REPORT_PLANES};
pub use sampling::{critical_level, estimate_rho_sampling, RoaEstimate, RoaMethod, RoaStatus, SamplingOptions};
pub use sdpa::{export_sdpa, parse_sdpa, SdpaEntry, SdpaProblem};
pub use sos::{assemble_sos, SosProgram};

use nalgebra::DMatrix;

use crate::error::{Result, SailError};
use crate::poly::{Polynomial, PolyVectorField};

/// `V_dot(x) = 2 x^T P f(x)`.
pub fn vdot_polynomial(p: &DMatrix<f64>, f: &PolyVectorField) -> Result<Polynomial> {
    let n = f.n_vars();
    if p.nrows() != n || p.ncols() != n {
        return Err(SailError::invalid("P", format!("expected {n}x{n}")));
    }
    let mut out = Polynomial::zero(n);
    for i in 0..n {
        // (P x)_i
        let px = Polynomial::from_terms(n, (0..n).map(|j| (crate::poly::Monomial::var(n, j), p[(i, j)])));
        out = out.add(&px.mul(&f.components[i]));
    }
    Ok(out.scale(2.0))
}

pub(crate) fn check_positive_definite(p: &DMatrix<f64>) -> Result<()> {
    if p.nrows() != p.ncols() {
        return Err(SailError::invalid("P", "must be square"));
    }
    if (p - p.transpose()).norm() > 1e-9 * p.norm() {
        return Err(SailError::invalid("P", "must be symmetric"));
    }
    let min = p.clone().symmetric_eigenvalues().min();
    if !(min > 0.0) {
        return Err(SailError::invalid("P", format!("not positive definite (min eigenvalue {min:e})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::stability::solve_lyapunov;

    #[test]
    fn vdot_linear_lyapunov_identity() {
        let a = DMatrix::from_row_slice(3, 3, &[-1.0, 2.0, 0.0, -0.5, -0.3, 1.0, 0.0, -1.0, -2.0]);
        let p = solve_lyapunov(&a, &DMatrix::identity(3, 3)).unwrap().p;
        let vdot = vdot_polynomial(&p, &PolyVectorField::linear(&a)).unwrap();
        for x in [[0.3, -1.0, 2.0], [1.0, 1.0, 1.0], [-0.7, 0.1, 0.0]] {
            let xx: f64 = x.iter().map(|v| v * v).sum();
            assert!((vdot.eval(&x) + xx).abs() < 1e-10);
        }
    }

    #[test]
    fn vdot_one_dimensional() {
        let f = PolyVectorField::new(vec![Polynomial::from_terms(
            1,
            [(Monomial(vec![1]), -1.0), (Monomial(vec![3]), 1.0)],
        )]);
        let vdot = vdot_polynomial(&DMatrix::identity(1, 1), &f).unwrap();
        assert_eq!(vdot.coefficient(&Monomial(vec![2])), -2.0);
        assert_eq!(vdot.coefficient(&Monomial(vec![4])), 2.0);
        assert_eq!(vdot.len(), 2);
    }
}
