//! Twelve-state rigid-body motion under beam pressure, gravity, and damping,
//! with the levitation feedback law and a fixed-step RK4 integrator.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SailError};
use crate::geometry::{MassProperties, SailShape};
use crate::radiation::{
    euler_rate_matrix, force_torque, rotation_body_to_inertial, BeamProfile, EulerAngles,
    ForceTorque,
};

/// Standard gravity used by the model, m/s^2 (acts along -z).
pub const GRAVITY: f64 = 9.8;

/// `G_z` at or below this is treated as loss of actuation, N/W.
pub const ACTUATION_EPS: f64 = 1e-12;

/// Position, Euler angles `(psi, theta, phi)`, inertial velocity, and body
/// angular velocity, in that serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
    pub theta: f64,
    pub phi: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub wx: f64,
    pub wy: f64,
    pub wz: f64,
}

impl VehicleState {
    pub const NAMES: [&'static str; 12] = [
        "x", "y", "z", "psi", "theta", "phi", "vx", "vy", "vz", "wx", "wy", "wz",
    ];

    /// At rest, upright, on the beam axis at height `z`.
    pub fn at_height(z: f64) -> Self {
        VehicleState {
            z,
            ..Default::default()
        }
    }

    pub fn to_array(&self) -> [f64; 12] {
        [
            self.x, self.y, self.z, self.psi, self.theta, self.phi, self.vx, self.vy, self.vz,
            self.wx, self.wy, self.wz,
        ]
    }

    pub fn from_array(a: [f64; 12]) -> Self {
        VehicleState {
            x: a[0],
            y: a[1],
            z: a[2],
            psi: a[3],
            theta: a[4],
            phi: a[5],
            vx: a[6],
            vy: a[7],
            vz: a[8],
            wx: a[9],
            wy: a[10],
            wz: a[11],
        }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn angles(&self) -> EulerAngles {
        EulerAngles::new(self.psi, self.theta, self.phi)
    }

    pub fn velocity(&self) -> Vector3<f64> {
        Vector3::new(self.vx, self.vy, self.vz)
    }

    pub fn omega(&self) -> Vector3<f64> {
        Vector3::new(self.wx, self.wy, self.wz)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Angle between body z and the inertial z axis, rad.
    pub fn tilt(&self) -> f64 {
        let r = rotation_body_to_inertial(&self.angles());
        r[(2, 2)].clamp(-1.0, 1.0).acos()
    }

    fn axpy(&self, k: f64, rate: &VehicleState) -> VehicleState {
        let (a, b) = (self.to_array(), rate.to_array());
        VehicleState::from_array(std::array::from_fn(|i| a[i] + k * b[i]))
    }
}

/// Proportional and derivative weights on the height error and `v_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlGains {
    pub kp: f64,
    pub kd: f64,
}

impl Default for ControlGains {
    fn default() -> Self {
        ControlGains { kp: 1.0, kd: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsParams {
    pub shape: SailShape,
    pub props: MassProperties,
    /// Beam geometry; its `power` is overwritten by the controller.
    pub beam: BeamProfile,
    /// Translational damping, kg/s.
    pub damping: Matrix3<f64>,
    pub gravity: Vector3<f64>,
    /// Levitation setpoint, m.
    pub z_d: f64,
    pub n_rays: usize,
    pub gains: ControlGains,
}

impl DynamicsParams {
    /// Damping matrix from its upper entries with `D_ji = -D_ij` off the
    /// diagonal.
    pub fn damping_from_entries(d11: f64, d12: f64, d13: f64, d22: f64, d23: f64, d33: f64) -> Matrix3<f64> {
        Matrix3::new(d11, d12, d13, -d12, d22, d23, -d13, -d23, d33)
    }

    pub fn mass(&self) -> f64 {
        self.props.total_mass
    }

    /// Unit-power ray trace at `state`.
    pub fn trace(&self, state: &VehicleState) -> Result<ForceTorque> {
        let beam = BeamProfile {
            power: 1.0,
            ..self.beam
        };
        force_torque(state, &self.shape, &self.props, &beam, self.n_rays)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlOutput {
    /// Commanded beam power, W.
    pub power: f64,
    pub saturated: bool,
    /// N/W at the pose where the command was computed.
    pub g_z: f64,
}

/// `u = -(M / G_z) (g_z + kp (z - z_d) + kd v_z)`, clamped to `u >= 0`.
pub fn levitation_control(z: f64, v_z: f64, params: &DynamicsParams, g_z: f64) -> Result<ControlOutput> {
    if !(g_z > ACTUATION_EPS) {
        return Err(SailError::ActuationLost { g_z });
    }
    let gains = params.gains;
    let raw = -params.mass() / g_z * (params.gravity.z + gains.kp * (z - params.z_d) + gains.kd * v_z);
    let saturated = raw < 0.0;
    Ok(ControlOutput {
        power: if saturated { 0.0 } else { raw },
        saturated,
        g_z,
    })
}

/// Time derivative of the full state at beam power `u`.
pub fn state_derivative(state: &VehicleState, params: &DynamicsParams, u: f64) -> Result<VehicleState> {
    let ft = if u == 0.0 {
        None
    } else {
        Some(params.trace(state)?.at_power(u))
    };
    derivative_with_load(state, params, ft.as_ref())
}

/// Derivative given an already-scaled force/torque (`None` means unlit).
pub(crate) fn derivative_with_load(
    state: &VehicleState,
    params: &DynamicsParams,
    load: Option<&ForceTorque>,
) -> Result<VehicleState> {
    let (force, torque) = load
        .map(|ft| (ft.force, ft.torque))
        .unwrap_or((Vector3::zeros(), Vector3::zeros()));
    let m = params.mass();
    let v = state.velocity();
    let w = state.omega();
    let rates = euler_rate_matrix(&state.angles())? * w; // (phi, theta, psi)
    let accel = force / m + params.gravity - params.damping * v / m;
    let j = &params.props.inertia;
    let j_inv = j
        .try_inverse()
        .ok_or_else(|| SailError::Numerical("inertia matrix is singular".into()))?;
    let w_dot = j_inv * (-w.cross(&(j * w)) + torque);
    Ok(VehicleState {
        x: v.x,
        y: v.y,
        z: v.z,
        psi: rates.z,
        theta: rates.y,
        phi: rates.x,
        vx: accel.x,
        vy: accel.y,
        vz: accel.z,
        wx: w_dot.x,
        wy: w_dot.y,
        wz: w_dot.z,
    })
}

/// How the beam power is chosen at each derivative evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlPolicy {
    /// The levitation feedback law, re-evaluated at every RK4 stage.
    Levitation,
    /// Constant power, W.
    FixedPower(f64),
}

/// Derivative plus the control that produced it. One ray trace serves both.
pub fn closed_loop_derivative(
    state: &VehicleState,
    params: &DynamicsParams,
    policy: ControlPolicy,
) -> Result<(VehicleState, ControlOutput)> {
    match policy {
        ControlPolicy::FixedPower(u) => {
            let (load, g_z) = if u == 0.0 {
                (None, f64::NAN)
            } else {
                let unit = params.trace(state)?;
                (Some(unit.at_power(u)), unit.g_vector.z)
            };
            let rate = derivative_with_load(state, params, load.as_ref())?;
            Ok((
                rate,
                ControlOutput {
                    power: u,
                    saturated: false,
                    g_z,
                },
            ))
        }
        ControlPolicy::Levitation => {
            let unit = params.trace(state)?;
            let control = levitation_control(state.z, state.vz, params, unit.g_vector.z)?;
            let load = unit.at_power(control.power);
            let rate = derivative_with_load(state, params, Some(&load))?;
            Ok((rate, control))
        }
    }
}

/// One classical RK4 step of an arbitrary 12-state field. A non-finite
/// stage aborts the step, leaving `state` as the last valid state.
pub fn rk4_integrate<F>(state: &VehicleState, dt: f64, mut field: F) -> Result<VehicleState>
where
    F: FnMut(&VehicleState) -> Result<VehicleState>,
{
    if !(dt > 0.0) {
        return Err(SailError::invalid("dt", "must be positive"));
    }
    let mut stage = |s: &VehicleState| -> Result<VehicleState> {
        let k = field(s)?;
        if !k.is_finite() {
            return Err(SailError::Numerical("non-finite state derivative".into()));
        }
        Ok(k)
    };
    let k1 = stage(state)?;
    let k2 = stage(&state.axpy(0.5 * dt, &k1))?;
    let k3 = stage(&state.axpy(0.5 * dt, &k2))?;
    let k4 = stage(&state.axpy(dt, &k3))?;
    let a = state.to_array();
    let (b1, b2, b3, b4) = (k1.to_array(), k2.to_array(), k3.to_array(), k4.to_array());
    let next = VehicleState::from_array(std::array::from_fn(|i| {
        a[i] + dt / 6.0 * (b1[i] + 2.0 * b2[i] + 2.0 * b3[i] + b4[i])
    }));
    if !next.is_finite() {
        return Err(SailError::Numerical("non-finite state after step".into()));
    }
    Ok(next)
}

pub fn rk4_step(
    state: &VehicleState,
    params: &DynamicsParams,
    dt: f64,
    policy: ControlPolicy,
) -> Result<VehicleState> {
    rk4_integrate(state, dt, |s| closed_loop_derivative(s, params, policy).map(|(k, _)| k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Largest tilt from the beam axis inside the modeled validity range, rad.
    pub max_tilt: f64,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            dt: 1e-3,
            t_end: 60.0,
            max_tilt: 80f64.to_radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub state: VehicleState,
    pub control: ControlOutput,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceMetrics {
    /// First time after which `|z - z_d| < 0.01 z_d` for every later row.
    pub settling_time: Option<f64>,
    pub final_height_error: f64,
    /// `|(theta, phi)|` at the last row, rad.
    pub final_tilt_norm: f64,
    /// `|(w_x, w_y)|` at the last row, rad/s.
    pub final_rate_norm: f64,
    pub saturated_steps: usize,
    pub last_saturation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    pub metrics: ConvergenceMetrics,
}

impl Trajectory {
    pub const CSV_HEADER: &'static str = "t,x,y,z,psi,theta,phi,vx,vy,vz,wx,wy,wz,u,saturated";

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 200);
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&crate::io::sig9(row.t));
            for v in row.state.to_array() {
                out.push(',');
                out.push_str(&crate::io::sig9(v));
            }
            out.push(',');
            out.push_str(&crate::io::sig9(row.control.power));
            out.push(',');
            out.push(if row.control.saturated { '1' } else { '0' });
            out.push('\n');
        }
        out
    }

    fn finish(&mut self, z_d: f64) {
        let band = 0.01 * z_d.abs();
        let mut settling = None;
        for row in self.rows.iter().rev() {
            if (row.state.z - z_d).abs() < band {
                settling = Some(row.t);
            } else {
                break;
            }
        }
        let last = self.rows.last().map(|r| r.state).unwrap_or_default();
        self.metrics = ConvergenceMetrics {
            settling_time: settling,
            final_height_error: last.z - z_d,
            final_tilt_norm: last.theta.hypot(last.phi),
            final_rate_norm: last.wx.hypot(last.wy),
            saturated_steps: self.rows.iter().filter(|r| r.control.saturated).count(),
            last_saturation: self
                .rows
                .iter()
                .rev()
                .find(|r| r.control.saturated)
                .map(|r| r.t),
        };
    }
}

/// Closed-loop rollout under the levitation law. Rows are recorded after
/// every step, at `t = dt, 2 dt, ...`, each with the control evaluated at
/// that state.
pub fn simulate(
    initial: &VehicleState,
    params: &DynamicsParams,
    options: &SimulationOptions,
) -> Result<Trajectory> {
    if !(options.t_end > 0.0) {
        return Err(SailError::invalid("t_end", "must be positive"));
    }
    if !(options.dt > 0.0) {
        return Err(SailError::invalid("dt", "must be positive"));
    }
    let steps = (options.t_end / options.dt).round() as usize;
    let mut traj = Trajectory {
        rows: Vec::with_capacity(steps),
        metrics: ConvergenceMetrics::default(),
    };
    let fail = |time: f64, cause: SailError, mut traj: Trajectory| -> SailError {
        traj.finish(params.z_d);
        SailError::Simulation {
            time,
            cause: Box::new(cause),
            partial: Box::new(traj),
        }
    };

    let mut state = *initial;
    let check = |s: &VehicleState| -> Result<()> {
        if s.tilt() > options.max_tilt {
            return Err(SailError::Numerical(format!(
                "tilt {:.3} rad exceeds the {:.3} rad validity limit",
                s.tilt(),
                options.max_tilt
            )));
        }
        Ok(())
    };
    if let Err(e) = check(&state) {
        return Err(fail(0.0, e, traj));
    }
    let policy = ControlPolicy::Levitation;
    let mut stage1 = match closed_loop_derivative(&state, params, policy) {
        Ok(v) => v,
        Err(e) => return Err(fail(0.0, e, traj)),
    };
    for k in 1..=steps {
        let t = k as f64 * options.dt;
        let first = stage1.0;
        let mut used_first = false;
        let next = rk4_integrate(&state, options.dt, |s| {
            if !used_first {
                used_first = true;
                return Ok(first);
            }
            closed_loop_derivative(s, params, policy).map(|(rate, _)| rate)
        });
        state = match next.and_then(|s| check(&s).map(|_| s)) {
            Ok(s) => s,
            Err(e) => return Err(fail(t, e, traj)),
        };
        stage1 = match closed_loop_derivative(&state, params, policy) {
            Ok(v) => v,
            Err(e) => return Err(fail(t, e, traj)),
        };
        traj.rows.push(TrajectoryRow {
            t,
            state,
            control: stage1.1,
        });
    }
    traj.finish(params.z_d);
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{mass_properties, MassModel};
    use approx::assert_relative_eq;

    fn params(shape: SailShape, inertia: Option<Matrix3<f64>>) -> DynamicsParams {
        let mass = MassModel {
            sail_mass: 0.01,
            payload_mass: 0.01,
            mast_length: 2.0,
        };
        let mut props = mass_properties(&shape, &mass, 60, 60).unwrap();
        if let Some(j) = inertia {
            props.inertia = j;
        }
        DynamicsParams {
            shape,
            props,
            beam: BeamProfile::with_fwhm(0.0, shape.rim_radius()),
            damping: DynamicsParams::damping_from_entries(0.01, 0.01, 0.0, 0.01, 0.0, 0.0),
            gravity: Vector3::new(0.0, 0.0, -GRAVITY),
            z_d: 10.0,
            n_rays: 32,
            gains: ControlGains::default(),
        }
    }

    #[test]
    fn hover_power_balances_weight() {
        let p = params(SailShape::cone(1.0, 0.7), None);
        let g_z = 6.0e-9;
        let c = levitation_control(10.0, 0.0, &p, g_z).unwrap();
        assert_relative_eq!(c.power, 0.02 * 9.8 / g_z, max_relative = 1e-14);
        assert!(!c.saturated);
    }

    #[test]
    fn control_clamps_at_zero() {
        let p = params(SailShape::cone(1.0, 0.7), None);
        let edge = levitation_control(10.0 + 9.8, 0.0, &p, 6e-9).unwrap();
        assert_eq!(edge.power, 0.0);
        let high = levitation_control(30.0, 0.0, &p, 6e-9).unwrap();
        assert_eq!(high.power, 0.0);
        assert!(high.saturated);
        assert!(matches!(
            levitation_control(10.0, 0.0, &p, 0.0),
            Err(SailError::ActuationLost { .. })
        ));
    }

    #[test]
    fn damping_entries_are_skew_off_diagonal() {
        let d = DynamicsParams::damping_from_entries(1.0, 2.0, 3.0, 4.0, 5.0, 6.0);
        assert_eq!(d[(1, 0)], -2.0);
        assert_eq!(d[(2, 0)], -3.0);
        assert_eq!(d[(2, 1)], -5.0);
        assert_eq!(d[(1, 1)], 4.0);
    }

    #[test]
    fn unlit_body_free_falls() {
        let mut p = params(SailShape::cone(1.0, 0.7), None);
        p.damping = Matrix3::zeros();
        let mut s = VehicleState::at_height(3.0);
        s.theta = 0.2;
        s.psi = 1.0;
        let rate = state_derivative(&s, &p, 0.0).unwrap();
        assert_eq!(rate.velocity(), Vector3::new(0.0, 0.0, -9.8));
        assert_eq!(rate.omega(), Vector3::zeros());
    }

    #[test]
    fn principal_spin_is_steady() {
        let p = params(SailShape::cone(1.0, 0.7), Some(Matrix3::from_diagonal(&Vector3::new(1.0, 2.0, 3.0))));
        let mut s = VehicleState::at_height(3.0);
        s.wz = 2.5;
        let rate = state_derivative(&s, &p, 0.0).unwrap();
        assert_eq!(rate.omega(), Vector3::zeros());
    }

    #[test]
    fn gyroscopic_rate_matches_hand_cross_product() {
        let p = params(SailShape::cone(1.0, 0.7), Some(Matrix3::from_diagonal(&Vector3::new(1.0, 2.0, 3.0))));
        let mut s = VehicleState::at_height(3.0);
        s.wx = 0.1;
        s.wz = 1.0;
        // J w = (0.1, 0, 3); w x Jw = (0*3 - 1*0, 1*0.1 - 0.1*3, 0.1*0 - 0*0.1) = (0, -0.2, 0)
        // w_dot = J^-1 (-(w x Jw)) = (0, 0.2 / 2, 0)
        let rate = state_derivative(&s, &p, 0.0).unwrap();
        assert_relative_eq!(rate.wx, 0.0, epsilon = 1e-15);
        assert_relative_eq!(rate.wy, 0.1, epsilon = 1e-15);
        assert_relative_eq!(rate.wz, 0.0, epsilon = 1e-15);
    }

    fn decay_params() -> DynamicsParams {
        let mut p = params(SailShape::cone(1.0, 0.7), None);
        p.damping = Matrix3::identity() * p.mass();
        p.gravity = Vector3::zeros();
        p
    }

    #[test]
    fn rk4_decay_single_step() {
        let p = decay_params();
        let mut s = VehicleState::default();
        s.vz = 1.0;
        let next = rk4_step(&s, &p, 0.1, ControlPolicy::FixedPower(0.0)).unwrap();
        // RK4 on v' = -v: 1 - h + h^2/2 - h^3/6 + h^4/24, against exp(-0.1) = 0.904837418
        assert!((next.vz - (-0.1f64).exp()).abs() < 1e-7);
        assert_relative_eq!(next.vz, 1.0 - 0.1 + 0.005 - 0.001 / 6.0 + 0.0001 / 24.0, epsilon = 1e-15);
    }

    #[test]
    fn rk4_global_error_is_fourth_order() {
        let p = decay_params();
        let err = |dt: f64| {
            let mut s = VehicleState::default();
            s.vz = 1.0;
            let n = (2.0 / dt).round() as usize;
            for _ in 0..n {
                s = rk4_step(&s, &p, dt, ControlPolicy::FixedPower(0.0)).unwrap();
            }
            (s.vz - (-2.0f64).exp()).abs()
        };
        let ratio = err(0.2) / err(0.1);
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rk4_fixed_point_unchanged() {
        let s = VehicleState::from_array(std::array::from_fn(|i| i as f64 * 0.1));
        let next = rk4_integrate(&s, 0.05, |_| Ok(VehicleState::default())).unwrap();
        assert_eq!(next, s);
    }

    #[test]
    fn rk4_rejects_non_finite_field() {
        let s = VehicleState::at_height(1.0);
        let r = rk4_integrate(&s, 0.1, |_| {
            let mut k = VehicleState::default();
            k.vx = f64::NAN;
            Ok(k)
        });
        assert!(r.is_err());
    }

    #[test]
    fn symmetric_top_keeps_spin() {
        let mut p = params(SailShape::cone(1.0, 0.7), Some(Matrix3::from_diagonal(&Vector3::new(2.0, 2.0, 1.0))));
        p.gravity = Vector3::zeros();
        p.damping = Matrix3::zeros();
        let mut s = VehicleState::default();
        s.wx = 0.3;
        s.wy = -0.2;
        s.wz = 1.7;
        let w0 = s.omega().norm();
        for _ in 0..200 {
            s = rk4_step(&s, &p, 0.01, ControlPolicy::FixedPower(0.0)).unwrap();
        }
        assert_relative_eq!(s.wz, 1.7, epsilon = 1e-14);
        assert!((s.omega().norm() - w0).abs() < 1e-10);
    }

    #[test]
    fn free_body_energy_is_conserved() {
        let j = Matrix3::from_diagonal(&Vector3::new(1.0, 2.0, 3.0));
        let mut p = params(SailShape::cone(1.0, 0.7), Some(j));
        p.gravity = Vector3::zeros();
        p.damping = Matrix3::zeros();
        let mut s = VehicleState::default();
        s.vx = 0.4;
        s.wx = 0.3;
        s.wy = 0.5;
        s.wz = 0.2;
        let energy = |s: &VehicleState| {
            let w = s.omega();
            0.5 * p.mass() * s.velocity().norm_squared() + 0.5 * w.dot(&(j * w))
        };
        let e0 = energy(&s);
        for _ in 0..100 {
            s = rk4_step(&s, &p, 0.01, ControlPolicy::FixedPower(0.0)).unwrap();
        }
        assert!((energy(&s) - e0).abs() < 1e-9 * e0);
    }

    #[test]
    fn row_count_matches_horizon() {
        let p = params(SailShape::flat_disc(1.0), None);
        let opts = SimulationOptions {
            dt: 0.001,
            t_end: 0.01,
            ..Default::default()
        };
        let traj = simulate(&VehicleState::at_height(10.0), &p, &opts).unwrap();
        assert_eq!(traj.rows.len(), 10);
        assert_eq!(traj.to_csv().lines().count(), 11);
        assert!(traj.to_csv().starts_with(Trajectory::CSV_HEADER));
    }

    #[test]
    fn hover_equilibrium_persists() {
        let p = params(SailShape::cone(1.0, 40f64.to_radians()), None);
        let opts = SimulationOptions {
            dt: 0.01,
            t_end: 10.0,
            ..Default::default()
        };
        let traj = simulate(&VehicleState::at_height(10.0), &p, &opts).unwrap();
        for row in &traj.rows {
            let mut d = row.state.to_array();
            d[2] -= 10.0;
            assert!(d.iter().all(|v| v.abs() < 1e-6), "{:?}", row.state);
        }
    }

    #[test]
    fn edge_on_start_reports_failure() {
        let p = params(SailShape::cone(1.0, 40f64.to_radians()), None);
        let mut s = VehicleState::at_height(10.0);
        s.phi = std::f64::consts::FRAC_PI_2;
        let opts = SimulationOptions {
            dt: 0.01,
            t_end: 1.0,
            ..Default::default()
        };
        match simulate(&s, &p, &opts) {
            Err(SailError::Simulation { time, .. }) => assert!(time >= 0.0),
            other => panic!("expected a reported failure, got {other:?}"),
        }
    }
}
