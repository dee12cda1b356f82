//! Gaussian-beam radiation pressure on a specular sail, computed by casting a
//! square grid of rays, plus the Euler-angle kinematics used by the dynamics.
//!
//! Frames: inertial `x-y-z` with the beam nominally along `+z`, and body
//! `x_b-y_b-z_b` with origin at the vehicle CM. Euler angles follow the
//! `x-y'-z''` sequence: roll `phi` about x, pitch `theta` about the new y,
//! yaw `psi` about the twice-rotated z, so `R_B^I = R_x(phi) R_y(theta) R_z(psi)`.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::VehicleState;
use crate::error::{Result, SailError};
use crate::geometry::{MassProperties, SailShape};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rays per side may not go below this.
pub const MIN_RAYS_PER_SIDE: usize = 16;

const INTERSECTION_TOL: f64 = 1e-10;
const INTERSECTION_MAX_ITER: usize = 80;
const SCAN_SEGMENTS: usize = 32;

/// FWHM = 2 sigma sqrt(2 ln 2).
pub fn fwhm_from_sigma(sigma: f64) -> f64 {
    2.0 * sigma * (2.0 * std::f64::consts::LN_2).sqrt()
}

pub fn sigma_from_fwhm(fwhm: f64) -> f64 {
    fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProfile {
    /// Total power P0, W.
    pub power: f64,
    /// Gaussian standard deviation, m.
    pub sigma: f64,
    /// Unit beam axis in the inertial frame; the axis passes through the origin.
    pub axis: Vector3<f64>,
}

impl BeamProfile {
    pub fn new(power: f64, sigma: f64) -> Self {
        BeamProfile {
            power,
            sigma,
            axis: Vector3::z(),
        }
    }

    pub fn with_fwhm(power: f64, fwhm: f64) -> Self {
        Self::new(power, sigma_from_fwhm(fwhm))
    }

    pub fn fwhm(&self) -> f64 {
        fwhm_from_sigma(self.sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(SailError::invalid("sigma", "must be positive"));
        }
        if !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(SailError::invalid("power", "must be non-negative"));
        }
        if (self.axis.norm() - 1.0).abs() > 1e-12 {
            return Err(SailError::invalid("axis", "must be a unit vector"));
        }
        Ok(())
    }

    /// Flux at transverse coordinates measured from the beam axis, W/m^2.
    pub fn flux(&self, x: f64, y: f64) -> f64 {
        beam_flux(x, y, self)
    }
}

/// `P0 / (2 pi sigma^2) * exp(-(x^2 + y^2) / (2 sigma^2))`.
pub fn beam_flux(x: f64, y: f64, beam: &BeamProfile) -> f64 {
    let s2 = beam.sigma * beam.sigma;
    beam.power / (std::f64::consts::TAU * s2) * (-(x * x + y * y) / (2.0 * s2)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerAngles {
    pub psi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl EulerAngles {
    pub fn new(psi: f64, theta: f64, phi: f64) -> Self {
        EulerAngles { psi, theta, phi }
    }
}

fn rot_x(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// `R_B^I`: maps body-frame vectors into the inertial frame.
pub fn rotation_body_to_inertial(angles: &EulerAngles) -> Matrix3<f64> {
    rot_x(angles.phi) * rot_y(angles.theta) * rot_z(angles.psi)
}

/// Pitch magnitude beyond which the Euler-rate matrix is refused.
pub const GIMBAL_GUARD: f64 = std::f64::consts::FRAC_PI_2 - 1e-6;

/// `L_B^I`: maps body angular velocity to Euler-angle rates ordered along
/// the rotation sequence, `(phi_dot, theta_dot, psi_dot) = L * omega_b`.
pub fn euler_rate_matrix(angles: &EulerAngles) -> Result<Matrix3<f64>> {
    if !(angles.theta.abs() < GIMBAL_GUARD) {
        return Err(SailError::GimbalLock {
            pitch: angles.theta,
        });
    }
    let (sp, cp) = angles.psi.sin_cos();
    let (st, ct) = angles.theta.sin_cos();
    let tt = st / ct;
    Ok(Matrix3::new(
        cp / ct,
        -sp / ct,
        0.0,
        sp,
        cp,
        0.0,
        -cp * tt,
        sp * tt,
        1.0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceTorque {
    /// Net force, inertial frame, N.
    pub force: Vector3<f64>,
    /// Net torque about the CM, body frame, N m.
    pub torque: Vector3<f64>,
    /// Force per unit beam power, inertial frame, N/W.
    pub g_vector: Vector3<f64>,
    /// Torque per unit beam power, body frame, N m/W.
    pub torque_per_watt: Vector3<f64>,
    /// Rays whose intersection search did not converge.
    pub warnings: usize,
    /// Rays that struck the illuminated side.
    pub rays_hit: usize,
}

impl ForceTorque {
    /// Rescale to another beam power; force and torque are linear in power.
    pub fn at_power(&self, power: f64) -> ForceTorque {
        ForceTorque {
            force: self.g_vector * power,
            torque: self.torque_per_watt * power,
            ..*self
        }
    }
}

/// Ray-cast radiation force and torque on the sail at `state`.
///
/// The beam is sampled on an `n_rays x n_rays` grid covering a square of half
/// side `max(3w/2, 1.05 rim)` in the plane normal to the beam axis, centered on the
/// transverse position of the sail hub. Each ray carries `flux * cell area`
/// and, on its first specular hit with `b.n > 0`, transfers
/// `2 (p/c)(b.n) n`. Rays crossing the rim are weighted by a smooth coverage
/// fraction over one ray spacing, which keeps the quadrature continuous in
/// the pose.
pub fn force_torque(
    state: &VehicleState,
    shape: &SailShape,
    props: &MassProperties,
    beam: &BeamProfile,
    n_rays: usize,
) -> Result<ForceTorque> {
    beam.validate()?;
    shape.validate()?;
    if n_rays < MIN_RAYS_PER_SIDE {
        return Err(SailError::invalid(
            "n_rays",
            format!("need at least {MIN_RAYS_PER_SIDE} rays per side"),
        ));
    }
    let quad = RayQuadrature::new(state, shape, props, beam, n_rays);
    let unit = quad.integrate();
    Ok(unit.at_power(beam.power))
}

struct RayQuadrature<'a> {
    shape: &'a SailShape,
    rot: Matrix3<f64>,
    e1: Vector3<f64>,
    e2: Vector3<f64>,
    /// Ray direction in body coordinates.
    dir_b: Vector3<f64>,
    /// Body (base-centered) coordinates of the ray-plane origin.
    origin_b: Vector3<f64>,
    cm_offset: f64,
    rim: f64,
    rho_max: f64,
    spacing: f64,
    /// Transverse coordinates of the first ray center along e1 / e2.
    start: (f64, f64),
    n: usize,
    sigma: f64,
    monotone: bool,
}

impl<'a> RayQuadrature<'a> {
    fn new(
        state: &VehicleState,
        shape: &'a SailShape,
        props: &MassProperties,
        beam: &BeamProfile,
        n: usize,
    ) -> Self {
        let rot = rotation_body_to_inertial(&state.angles());
        let axis = beam.axis;
        let helper = if axis.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let e1 = (helper - axis * axis.dot(&helper)).normalize();
        let e2 = axis.cross(&e1);

        let r = state.position();
        let hub_body = Vector3::new(0.0, 0.0, shape.height(0.0) - props.cm_offset);
        let hub = r + rot * hub_body;
        let hub_t = (hub.dot(&e1), hub.dot(&e2));

        let rim = shape.rim_radius();
        let half = (1.5 * beam.fwhm()).max(rim * 1.05);
        let spacing = 2.0 * half / n as f64;
        let rho_max = (rim + 0.5 * spacing).min(shape.extension_limit());

        let dir_b = rot.transpose() * axis;
        let origin_b = rot.transpose() * (-r) + Vector3::new(0.0, 0.0, props.cm_offset);
        let lateral = (dir_b.x * dir_b.x + dir_b.y * dir_b.y).sqrt();
        let monotone = dir_b.z.abs() > lateral * shape.max_abs_slope(rho_max) * (1.0 + 1e-9);

        RayQuadrature {
            shape,
            rot,
            e1,
            e2,
            dir_b,
            origin_b,
            cm_offset: props.cm_offset,
            rim,
            rho_max,
            spacing,
            start: (hub_t.0 - half + 0.5 * spacing, hub_t.1 - half + 0.5 * spacing),
            n,
            sigma: beam.sigma,
            monotone,
        }
    }

    fn integrate(&self) -> ForceTorque {
        let s2 = self.sigma * self.sigma;
        let peak = 1.0 / (std::f64::consts::TAU * s2);
        let gauss = |t: f64| (-(t * t) / (2.0 * s2)).exp();
        let cols: Vec<f64> = (0..self.n)
            .map(|j| gauss(self.start.1 + j as f64 * self.spacing))
            .collect();
        let cell = self.spacing * self.spacing;
        let rb1 = self.rot.transpose() * self.e1;
        let rb2 = self.rot.transpose() * self.e2;

        let rows: Vec<RowSum> = (0..self.n)
            .into_par_iter()
            .map(|i| {
                let s = self.start.0 + i as f64 * self.spacing;
                let row_weight = peak * gauss(s) * cell;
                let mut acc = RowSum::default();
                for (j, &cw) in cols.iter().enumerate() {
                    let t = self.start.1 + j as f64 * self.spacing;
                    let q0 = self.origin_b + rb1 * s + rb2 * t;
                    self.trace(q0, row_weight * cw, &mut acc);
                }
                acc
            })
            .collect();

        let mut total = RowSum::default();
        for r in &rows {
            total.force += r.force;
            total.torque += r.torque;
            total.warnings += r.warnings;
            total.hits += r.hits;
        }
        let scale = 2.0 / SPEED_OF_LIGHT;
        ForceTorque {
            force: total.force * scale,
            torque: total.torque * scale,
            g_vector: total.force * scale,
            torque_per_watt: total.torque * scale,
            warnings: total.warnings,
            rays_hit: total.hits,
        }
    }

    /// Height of the ray above the surface at parameter `lambda`, with its
    /// derivative.
    #[inline]
    fn gap(&self, q0: &Vector3<f64>, lambda: f64) -> (f64, f64) {
        let d = &self.dir_b;
        let qx = q0.x + lambda * d.x;
        let qy = q0.y + lambda * d.y;
        let qz = q0.z + lambda * d.z;
        let rho = (qx * qx + qy * qy).sqrt();
        let h = qz - self.shape.height(rho);
        let drho = if rho > 1e-14 {
            (qx * d.x + qy * d.y) / rho
        } else {
            0.0
        };
        (h, d.z - self.shape.slope(rho) * drho)
    }

    #[inline]
    fn trace(&self, q0: Vector3<f64>, power: f64, acc: &mut RowSum) {
        let Some((lambda, converged)) = self.first_hit(&q0) else {
            return;
        };
        if !converged {
            acc.warnings += 1;
        }
        let q = q0 + self.dir_b * lambda;
        let rho = (q.x * q.x + q.y * q.y).sqrt();
        let coverage = smoothstep((self.rim + 0.5 * self.spacing - rho) / self.spacing);
        if coverage <= 0.0 {
            return;
        }
        let n_b = self.shape.normal_at(q.x, q.y);
        let cos_inc = self.dir_b.dot(&n_b);
        if cos_inc <= 0.0 {
            return;
        }
        acc.hits += 1;
        let w = power * coverage * cos_inc;
        acc.force += (self.rot * n_b) * w;
        let lever = Vector3::new(q.x, q.y, q.z - self.cm_offset);
        acc.torque += lever.cross(&n_b) * w;
    }

    /// Smallest ray parameter at which the ray meets the (rim-extended)
    /// surface, or `None` if it misses. The flag is false when the root
    /// search hit its iteration cap.
    fn first_hit(&self, q0: &Vector3<f64>) -> Option<(f64, bool)> {
        let d = &self.dir_b;
        let a = d.x * d.x + d.y * d.y;
        let b = q0.x * d.x + q0.y * d.y;
        let c = q0.x * q0.x + q0.y * q0.y - self.rho_max * self.rho_max;
        if a < 1e-24 {
            if c > 0.0 || d.z.abs() < 1e-300 {
                return None;
            }
            let rho = (q0.x * q0.x + q0.y * q0.y).sqrt();
            return Some(((self.shape.height(rho) - q0.z) / d.z, true));
        }
        let disc = b * b - a * c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let (l0, l1) = ((-b - sq) / a, (-b + sq) / a);
        let h0 = self.gap(q0, l0).0;
        if self.monotone {
            let h1 = self.gap(q0, l1).0;
            if h0 == 0.0 {
                return Some((l0, true));
            }
            if h0.signum() == h1.signum() {
                return None;
            }
            return Some(self.refine(q0, l0, l1, h0));
        }
        let step = (l1 - l0) / SCAN_SEGMENTS as f64;
        let mut prev = (l0, h0);
        for k in 1..=SCAN_SEGMENTS {
            let l = if k == SCAN_SEGMENTS { l1 } else { l0 + k as f64 * step };
            let h = self.gap(q0, l).0;
            if prev.1 == 0.0 {
                return Some((prev.0, true));
            }
            if h.signum() != prev.1.signum() {
                return Some(self.refine(q0, prev.0, l, prev.1));
            }
            prev = (l, h);
        }
        None
    }

    /// Safeguarded Newton on a sign-changing bracket.
    fn refine(&self, q0: &Vector3<f64>, mut lo: f64, mut hi: f64, h_lo: f64) -> (f64, bool) {
        // orient so that gap(lo) < 0 < gap(hi)
        if h_lo > 0.0 {
            std::mem::swap(&mut lo, &mut hi);
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..INTERSECTION_MAX_ITER {
            let (h, dh) = self.gap(q0, x);
            if h == 0.0 {
                return (x, true);
            }
            if h < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - h / dh;
            let inside = (newton - lo) * (newton - hi) < 0.0;
            let next = if dh != 0.0 && inside {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let dx = (next - x).abs();
            x = next;
            if dx < INTERSECTION_TOL {
                return (x, true);
            }
        }
        (x, false)
    }
}

#[derive(Default)]
struct RowSum {
    force: Vector3<f64>,
    torque: Vector3<f64>,
    warnings: usize,
    hits: usize,
}

#[inline]
fn smoothstep(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        s * s * (3.0 - 2.0 * s)
    }
}
