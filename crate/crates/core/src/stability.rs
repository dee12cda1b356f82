//! Local analysis of the unactuated (internal) dynamics about the levitated
//! equilibrium.
//!
//! The internal state is `x_u = (x, y, theta, phi, v_x, v_y, w_x, w_y)`; yaw
//! is held at zero and the body spin `w_z` enters as a fixed parameter. The
//! height loop is assumed closed at `z = z_d`, `v_z = 0`.

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{derivative_with_load, DynamicsParams, VehicleState};
use crate::error::{Result, SailError};
use crate::poly::{monomials, Monomial, PolyVectorField, Polynomial};

pub const N_INTERNAL: usize = 8;

pub const INTERNAL_NAMES: [&str; N_INTERNAL] = ["x", "y", "theta", "phi", "vx", "vy", "wx", "wy"];

/// How beam power behaves while the internal state is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerMode {
    /// Power frozen at the upright hover value `u* = M g / G_z(0)`.
    #[default]
    FixedHover,
    /// Power from the levitation law at the perturbed pose (`z = z_d`,
    /// `v_z = 0`), i.e. `u = M g / G_z(pose)`.
    Live,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalOptions {
    /// Fixed body spin `w_z`, rad/s.
    pub spin: f64,
    pub power_mode: PowerMode,
    /// Central-difference step for positions (m) and angles (rad).
    pub pose_step: f64,
    /// Central-difference step for velocities and rates.
    pub rate_step: f64,
}

impl Default for InternalOptions {
    fn default() -> Self {
        InternalOptions {
            spin: 0.0,
            power_mode: PowerMode::FixedHover,
            pose_step: 1e-6,
            rate_step: 1e-6,
        }
    }
}

/// The internal dynamics as a callable field.
pub struct InternalDynamics<'a> {
    params: &'a DynamicsParams,
    options: InternalOptions,
    hover_power: f64,
}

impl<'a> InternalDynamics<'a> {
    pub fn new(params: &'a DynamicsParams, options: InternalOptions) -> Result<Self> {
        let upright = VehicleState::at_height(params.z_d);
        let g_z = params.trace(&upright)?.g_vector.z;
        if !(g_z > crate::dynamics::ACTUATION_EPS) {
            return Err(SailError::ActuationLost { g_z });
        }
        let hover_power = -params.mass() * params.gravity.z / g_z;
        Ok(InternalDynamics {
            params,
            options,
            hover_power,
        })
    }

    pub fn hover_power(&self) -> f64 {
        self.hover_power
    }

    pub fn full_state(&self, xu: &[f64]) -> VehicleState {
        VehicleState {
            x: xu[0],
            y: xu[1],
            z: self.params.z_d,
            psi: 0.0,
            theta: xu[2],
            phi: xu[3],
            vx: xu[4],
            vy: xu[5],
            vz: 0.0,
            wx: xu[6],
            wy: xu[7],
            wz: self.options.spin,
        }
    }

    pub fn eval(&self, xu: &[f64]) -> Result<[f64; N_INTERNAL]> {
        Ok(self.eval_split(xu)?.0)
    }

    /// The field at `xu` and at the same pose with `v_x, v_y, w_x, w_y`
    /// zeroed, sharing one ray trace. Their difference carries no
    /// quadrature noise.
    pub fn eval_split(&self, xu: &[f64]) -> Result<([f64; N_INTERNAL], [f64; N_INTERNAL])> {
        let state = self.full_state(xu);
        let unit = self.params.trace(&state)?;
        let power = match self.options.power_mode {
            PowerMode::FixedHover => self.hover_power,
            PowerMode::Live => {
                let g_z = unit.g_vector.z;
                if !(g_z > crate::dynamics::ACTUATION_EPS) {
                    return Err(SailError::ActuationLost { g_z });
                }
                -self.params.mass() * self.params.gravity.z / g_z
            }
        };
        let load = unit.at_power(power);
        let pick = |r: VehicleState| [r.x, r.y, r.theta, r.phi, r.vx, r.vy, r.wx, r.wy];
        let full = derivative_with_load(&state, self.params, Some(&load))?;
        let still = VehicleState {
            vx: 0.0,
            vy: 0.0,
            wx: 0.0,
            wy: 0.0,
            ..state
        };
        let pose = derivative_with_load(&still, self.params, Some(&load))?;
        Ok((pick(full), pick(pose)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: DMatrix<f64>,
    /// Beam power held during differentiation, W.
    pub hover_power: f64,
    pub spin: f64,
}

impl LinearModel {
    /// `A1..A8` read from their defining entries.
    pub fn coefficients(&self) -> [f64; 8] {
        let a = &self.a;
        [
            a[(4, 0)],
            a[(4, 2)],
            a[(6, 1)],
            a[(6, 3)],
            a[(6, 7)],
            a[(4, 4)],
            a[(5, 5)],
            a[(4, 5)],
        ]
    }

    /// Relative mismatch of the four axisymmetry pairings:
    /// `F_x/x ~ F_y/y`, `F_x/theta ~ -F_y/phi`, `tau_x/y ~ -tau_y/x`,
    /// `tau_x/phi ~ tau_y/theta`.
    pub fn symmetry_residuals(&self) -> [f64; 4] {
        let a = &self.a;
        let rel = |p: f64, q: f64| (p - q).abs() / p.abs().max(q.abs()).max(1e-300);
        [
            rel(a[(4, 0)], a[(5, 1)]),
            rel(a[(4, 2)], -a[(5, 3)]),
            rel(a[(6, 1)], -a[(7, 0)]),
            rel(a[(6, 3)], a[(7, 2)]),
        ]
    }
}

/// Central-difference Jacobian of the internal dynamics at the origin.
pub fn linearize_internal(params: &DynamicsParams, options: &InternalOptions) -> Result<LinearModel> {
    let field = InternalDynamics::new(params, *options)?;
    let f0 = field.eval(&[0.0; N_INTERNAL])?;
    let mut a = DMatrix::zeros(N_INTERNAL, N_INTERNAL);
    let mut worst = (0.0f64, 0usize);
    for j in 0..N_INTERNAL {
        let h = if j < 4 { options.pose_step } else { options.rate_step };
        let mut xp = [0.0; N_INTERNAL];
        xp[j] = h;
        let mut xm = [0.0; N_INTERNAL];
        xm[j] = -h;
        let fp = field.eval(&xp)?;
        let fm = field.eval(&xm)?;
        let col_scale = (0..N_INTERNAL)
            .map(|i| ((fp[i] - fm[i]) / (2.0 * h)).abs())
            .fold(0.0, f64::max);
        for i in 0..N_INTERNAL {
            a[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            let forward = (fp[i] - f0[i]) / h;
            let backward = (f0[i] - fm[i]) / h;
            let mismatch = (forward - backward).abs() / (col_scale + 1.0);
            if mismatch > worst.0 {
                worst = (mismatch, j);
            }
        }
    }
    if worst.0 > LINEARIZATION_TOL {
        return Err(SailError::IllConditioned(format!(
            "one-sided differences disagree by {:.3e} in column {} ({})",
            worst.0, worst.1, INTERNAL_NAMES[worst.1]
        )));
    }
    Ok(LinearModel {
        a,
        hover_power: field.hover_power(),
        spin: options.spin,
    })
}

/// Largest tolerated forward/backward difference mismatch, relative to the
/// column scale.
pub const LINEARIZATION_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzReport {
    pub hurwitz: bool,
    /// Largest real part among the eigenvalues.
    pub abscissa: f64,
}

pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<nalgebra::Complex<f64>>> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(SailError::Numerical("matrix has non-finite entries".into()));
    }
    let schur = a
        .clone()
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| SailError::Numerical("eigenvalue iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Hurwitz iff every eigenvalue has real part below `-1e-9`.
pub fn is_hurwitz(a: &DMatrix<f64>) -> Result<HurwitzReport> {
    let abscissa = eigenvalues(a)?
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(HurwitzReport {
        hurwitz: abscissa < -1e-9,
        abscissa,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLyapunov {
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    /// `|PA + A^T P + Q|_F`.
    pub residual: f64,
}

impl QuadraticLyapunov {
    pub fn value(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        (v.transpose() * &self.p * &v)[(0, 0)]
    }
}

fn lyapunov_residual(a: &DMatrix<f64>, p: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    p * a + a.transpose() * p + q
}

/// Unique symmetric `P` with `PA + A^T P = -Q`, via the vectorized
/// (Kronecker) linear system.
pub fn solve_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<QuadraticLyapunov> {
    let n = a.nrows();
    if a.ncols() != n || q.nrows() != n || q.ncols() != n {
        return Err(SailError::Numerical("dimension mismatch".into()));
    }
    let report = is_hurwitz(a)?;
    if !report.hurwitz {
        return Err(SailError::NotHurwitz {
            abscissa: report.abscissa,
        });
    }
    if (q - q.transpose()).norm() > 1e-12 * q.norm() || q.clone().cholesky().is_none() {
        return Err(SailError::Numerical("Q must be symmetric positive definite".into()));
    }

    // vec(PA) = (A^T kron I) vec(P), vec(A^T P) = (I kron A^T) vec(P)
    let eye = DMatrix::<f64>::identity(n, n);
    let at = a.transpose();
    let k = at.kronecker(&eye) + eye.kronecker(&at);
    let lu = k.lu();
    let solve = |rhs: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        let b = DVector::from_column_slice((-rhs).as_slice());
        let x = lu
            .solve(&b)
            .ok_or_else(|| SailError::Numerical("Lyapunov system is singular".into()))?;
        Ok(DMatrix::from_column_slice(n, n, x.as_slice()))
    };
    let mut p = solve(q)?;
    p = (&p + p.transpose()) * 0.5;
    // one round of iterative refinement
    let r = lyapunov_residual(a, &p, q);
    let mut dp = solve(&r)?;
    dp = (&dp + dp.transpose()) * 0.5;
    p += dp;

    let residual = lyapunov_residual(a, &p, q).norm();
    if residual > 1e-10 * q.norm() {
        return Err(SailError::Numerical(format!(
            "Lyapunov residual {residual:e} too large; A is badly conditioned"
        )));
    }
    let min_eig = p.symmetric_eigenvalues().min();
    if !(min_eig > 0.0) {
        return Err(SailError::Numerical(format!(
            "Lyapunov solution is not positive definite (min eigenvalue {min_eig:e})"
        )));
    }
    Ok(QuadraticLyapunov {
        p,
        q: q.clone(),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorOptions {
    /// Stencil half-width per internal coordinate.
    pub radius: [f64; N_INTERNAL],
    /// Number of antithetic point pairs in the stencil.
    pub pairs: usize,
    /// Largest relative fit residual accepted per component.
    pub tolerance: f64,
    pub internal: InternalOptions,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions {
            radius: [0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05],
            pairs: 320,
            tolerance: 1e-2,
            internal: InternalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorExpansion {
    pub field: PolyVectorField,
    pub linear: LinearModel,
    /// Relative least-squares residual per component.
    pub fit_residuals: [f64; N_INTERNAL],
    /// Largest gap between the fitted linear block and the finite-difference
    /// `A`, relative to the largest entry of the same row of `A`.
    pub linear_mismatch: f64,
    /// Worst condition number among the scaled design matrices.
    pub condition: f64,
}

/// Halton point `index` in `[0, 1)^dim` with the first `dim` primes.
pub(crate) fn halton(index: usize, dim: usize) -> Vec<f64> {
    const PRIMES: [usize; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    assert!(dim <= PRIMES.len());
    PRIMES[..dim]
        .iter()
        .map(|&b| {
            let (mut f, mut r, mut i) = (1.0, 0.0, index);
            while i > 0 {
                f /= b as f64;
                r += f * (i % b) as f64;
                i /= b;
            }
            r
        })
        .collect()
}

/// Degree-3 polynomial model of the internal dynamics.
///
/// The field splits as `f(q, r) = f(q, 0) + [f(q, r) - f(q, 0)]` with pose
/// `q = (x, y, theta, phi)` and rates `r`. The pose part carries the
/// ray-traced radiation terms and is fitted over pose monomials only; the
/// rate part (kinematics, damping, gyroscopic terms) is fitted over
/// monomials containing a rate. Both fits use the even and odd parts of the
/// exact field over antithetic stencil pairs `+-h*xi`. The linear block is
/// then replaced by the finite-difference `A`.
pub fn taylor_expand_internal(params: &DynamicsParams, options: &TaylorOptions) -> Result<TaylorExpansion> {
    let linear = linearize_internal(params, &options.internal)?;
    let field = InternalDynamics::new(params, options.internal)?;
    let n = N_INTERNAL;
    let h = options.radius;
    if h.iter().any(|&r| !(r > 0.0)) {
        return Err(SailError::invalid("taylor radius", "must be positive"));
    }

    let is_pose = |m: &Monomial| m.0[4..].iter().all(|&e| e == 0);
    let split = |lo: u32, hi: u32, pose: bool| -> Vec<Monomial> {
        monomials(n, lo, hi).into_iter().filter(|m| is_pose(m) == pose).collect()
    };
    let odd_of = |pose: bool| -> Vec<Monomial> { split(1, 1, pose).into_iter().chain(split(3, 3, pose)).collect() };
    let bases = [
        (split(2, 2, true), odd_of(true)),
        (split(2, 2, false), odd_of(false)),
    ];
    let m = options.pairs;
    let needed = bases.iter().map(|(e, o)| e.len().max(o.len())).max().unwrap_or(0);
    if m < 2 * needed {
        return Err(SailError::invalid(
            "taylor pairs",
            format!("need at least {} stencil pairs", 2 * needed),
        ));
    }

    // stencil in scaled coordinates xi in [-1, 1]^8
    let xis: Vec<Vec<f64>> = (1..=m)
        .map(|k| halton(k, n).into_iter().map(|u| 2.0 * u - 1.0).collect())
        .collect();
    let samples: Vec<_> = xis
        .iter()
        .map(|xi| {
            let xp: Vec<f64> = xi.iter().zip(&h).map(|(s, r)| s * r).collect();
            let xm: Vec<f64> = xp.iter().map(|v| -v).collect();
            Ok((field.eval_split(&xp)?, field.eval_split(&xm)?))
        })
        .collect::<Result<_>>()?;
    // targets[part][parity]: m x n, part 0 = pose, 1 = rate; parity 0 = even
    let mut targets = [[DMatrix::zeros(m, n), DMatrix::zeros(m, n)], [DMatrix::zeros(m, n), DMatrix::zeros(m, n)]];
    for (k, ((fp, pp), (fm, pm))) in samples.iter().enumerate() {
        for i in 0..n {
            let (rp, rm) = (fp[i] - pp[i], fm[i] - pm[i]);
            targets[0][0][(k, i)] = 0.5 * (pp[i] + pm[i]);
            targets[0][1][(k, i)] = 0.5 * (pp[i] - pm[i]);
            targets[1][0][(k, i)] = 0.5 * (rp + rm);
            targets[1][1][(k, i)] = 0.5 * (rp - rm);
        }
    }

    let unscale = |mono: &Monomial| -> f64 { mono.0.iter().zip(&h).map(|(&e, r)| r.powi(e as i32)).product() };
    let mut components: Vec<Polynomial> = (0..n).map(|_| Polynomial::zero(n)).collect();
    let mut resid = [0.0f64; N_INTERNAL];
    let mut scale = [0.0f64; N_INTERNAL];
    let mut fitted_linear = DMatrix::<f64>::zeros(n, n);
    let mut condition = 0.0f64;
    for (part, (even_basis, odd_basis)) in bases.iter().enumerate() {
        for (parity, basis) in [even_basis, odd_basis].into_iter().enumerate() {
            let design = DMatrix::from_fn(m, basis.len(), |k, c| basis[c].eval(&xis[k]));
            let cond = condition_number(&design);
            condition = condition.max(cond);
            if !(cond < 1e8) {
                return Err(SailError::IllConditioned(format!(
                    "Taylor stencil design matrix condition {cond:e}"
                )));
            }
            let svd = design.clone().svd(true, true);
            let y = &targets[part][parity];
            let coef = svd.solve(y, 1e-12).map_err(|e| SailError::Numerical(e.to_string()))?;
            let r = &design * &coef - y;
            for i in 0..n {
                resid[i] += r.column(i).norm_squared();
                scale[i] += y.column(i).norm_squared();
                for (c, mono) in basis.iter().enumerate() {
                    let value = coef[(c, i)] / unscale(mono);
                    if mono.degree() == 1 {
                        let j = mono.0.iter().position(|&e| e == 1).unwrap_or(0);
                        fitted_linear[(i, j)] += value;
                    } else {
                        components[i].add_term(mono.clone(), value);
                    }
                }
            }
        }
    }
    let mut fit_residuals = [0.0; N_INTERNAL];
    let mut linear_mismatch = 0.0f64;
    for i in 0..n {
        fit_residuals[i] = if scale[i] > 0.0 { (resid[i] / scale[i]).sqrt() } else { 0.0 };
        let row_scale = linear.a.row(i).amax().max(1e-12);
        for j in 0..n {
            components[i].add_term(Monomial::var(n, j), linear.a[(i, j)]);
            linear_mismatch = linear_mismatch.max((fitted_linear[(i, j)] - linear.a[(i, j)]).abs() / row_scale);
        }
    }

    if let Some((worst, &r)) = fit_residuals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
        if r > options.tolerance {
            return Err(SailError::ExpansionQuality {
                component: worst,
                residual: r,
                tolerance: options.tolerance,
            });
        }
    }

    Ok(TaylorExpansion {
        field: PolyVectorField::new(components),
        linear,
        fit_residuals,
        linear_mismatch,
        condition,
    })
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}
