use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use super::check_positive_definite;
use crate::error::{Result, SailError};

/// Planes reported for the sail: x-y, x-phi, theta-phi, y-theta (indices
/// into the internal state).
pub const REPORT_PLANES: [(usize, usize); 4] = [(0, 1), (0, 3), (2, 3), (1, 2)];

/// Shadow of `{x : x^T P x <= rho}` on the coordinate plane `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub plane: (usize, usize),
    /// The projected ellipse is `z^T S z <= rho`.
    pub s: Matrix2<f64>,
    /// Major then minor semi-axis.
    pub semi_axes: (f64, f64),
    /// Half-widths along the two coordinate axes.
    pub extents: (f64, f64),
    pub boundary: Vec<[f64; 2]>,
}

impl Projection {
    /// A full-dimensional point with `x^T P x = z^T S z` whose `(i, j)`
    /// coordinates are `z`: the minimizer of `V` over the fibre.
    pub fn lift(&self, p: &DMatrix<f64>, z: [f64; 2]) -> Result<DVector<f64>> {
        let n = p.nrows();
        let (i, j) = self.plane;
        let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let mut x = DVector::zeros(n);
        x[i] = z[0];
        x[j] = z[1];
        if rest.is_empty() {
            return Ok(x);
        }
        let prr = DMatrix::from_fn(rest.len(), rest.len(), |a, b| p[(rest[a], rest[b])]);
        let prs = DMatrix::from_fn(rest.len(), 2, |a, b| p[(rest[a], [i, j][b])]);
        let xr = prr
            .cholesky()
            .ok_or_else(|| SailError::Numerical("P block is not positive definite".into()))?
            .solve(&(-prs * DVector::from_vec(z.to_vec())));
        for (a, &k) in rest.iter().enumerate() {
            x[k] = xr[a];
        }
        Ok(x)
    }
}

pub fn project_ellipsoid(p: &DMatrix<f64>, rho: f64, plane: (usize, usize), n_points: usize) -> Result<Projection> {
    check_positive_definite(p)?;
    let n = p.nrows();
    let (i, j) = plane;
    if i == j || i >= n || j >= n {
        return Err(SailError::invalid("plane", format!("need distinct indices below {n}")));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(SailError::invalid("rho", "must be positive and finite"));
    }
    let p_inv = p
        .clone()
        .cholesky()
        .ok_or_else(|| SailError::Numerical("P is not positive definite".into()))?
        .inverse();
    let block = Matrix2::new(p_inv[(i, i)], p_inv[(i, j)], p_inv[(j, i)], p_inv[(j, j)]);
    let det = block.determinant();
    if !(det > 1e-14 * block.norm_squared()) {
        return Err(SailError::IllConditioned(format!("projected block of P^-1 is near singular (det {det:e})")));
    }
    let s = block
        .try_inverse()
        .ok_or_else(|| SailError::IllConditioned("projected block is singular".into()))?;
    let s = (s + s.transpose()) * 0.5;

    let eig = s.symmetric_eigen();
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let (a0, a1) = ((rho / l0).sqrt(), (rho / l1).sqrt());
    let semi_axes = if a0 >= a1 { (a0, a1) } else { (a1, a0) };
    let extents = ((rho * block[(0, 0)]).sqrt(), (rho * block[(1, 1)]).sqrt());

    // z = sqrt(rho) S^{-1/2} (cos t, sin t)
    let root_inv = eig.eigenvectors
        * Matrix2::from_diagonal(&Vector2::new(1.0 / l0.sqrt(), 1.0 / l1.sqrt()))
        * eig.eigenvectors.transpose();
    let boundary = (0..n_points)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n_points as f64;
            let z = root_inv * Vector2::new(t.cos(), t.sin()) * rho.sqrt();
            [z.x, z.y]
        })
        .collect();

    Ok(Projection {
        plane,
        s,
        semi_axes,
        extents,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd(n: usize, seed: u64) -> DMatrix<f64> {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let b = DMatrix::from_fn(n, n, |_, _| next());
        &b * b.transpose() + DMatrix::identity(n, n) * 0.1
    }

    #[test]
    fn unit_sphere_projects_to_unit_circle() {
        let p = DMatrix::identity(8, 8);
        for plane in REPORT_PLANES {
            let proj = project_ellipsoid(&p, 1.0, plane, 64).unwrap();
            assert!((proj.semi_axes.0 - 1.0).abs() < 1e-14);
            assert!((proj.semi_axes.1 - 1.0).abs() < 1e-14);
            for z in &proj.boundary {
                assert!((z[0].hypot(z[1]) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn diagonal_p_semi_axes() {
        let d = [1.0, 4.0, 9.0, 16.0];
        let p = DMatrix::from_diagonal(&DVector::from_row_slice(&d));
        let proj = project_ellipsoid(&p, 2.0, (1, 3), 16).unwrap();
        assert!((proj.extents.0 - (2.0f64 / 4.0).sqrt()).abs() < 1e-14);
        assert!((proj.extents.1 - (2.0f64 / 16.0).sqrt()).abs() < 1e-14);
        assert!((proj.semi_axes.0 - (0.5f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn boundary_lifts_onto_level_set() {
        let p = spd(8, 7);
        let rho = 0.3;
        for plane in [(0, 1), (2, 7), (5, 3)] {
            let proj = project_ellipsoid(&p, rho, plane, 50).unwrap();
            for z in &proj.boundary {
                let x = proj.lift(&p, *z).unwrap();
                let v = (x.transpose() * &p * &x)[(0, 0)];
                assert!((v - rho).abs() < 1e-8 * rho, "{v} vs {rho}");
                assert_eq!(x[plane.0], z[0]);
                assert_eq!(x[plane.1], z[1]);
            }
        }
    }

    #[test]
    fn shadow_bounds_random_ellipsoid_points() {
        // every projected surface point lies inside the shadow, and the
        // farthest ones approach its boundary
        let p = spd(4, 3);
        let rho = 1.0;
        let proj = project_ellipsoid(&p, rho, (0, 2), 8).unwrap();
        let chol = p.clone().cholesky().unwrap();
        let mut state = 11u64;
        let mut gauss = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u1 = ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u2 = ((state >> 11) as f64) / (1u64 << 53) as f64;
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        };
        let mut max_level: f64 = 0.0;
        for _ in 0..100_000 {
            let g = DVector::from_fn(4, |_, _| gauss());
            let g = &g / g.norm();
            let x = chol.l().transpose().solve_upper_triangular(&g).unwrap();
            let z = Vector2::new(x[0], x[2]);
            let level = (z.transpose() * proj.s * z)[(0, 0)];
            assert!(level <= rho * (1.0 + 1e-12));
            max_level = max_level.max(level);
        }
        assert!(max_level > 0.98 * rho);
    }

    #[test]
    fn rejects_same_axis() {
        assert!(project_ellipsoid(&DMatrix::identity(3, 3), 1.0, (1, 1), 8).is_err());
    }
}
