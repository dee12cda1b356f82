//! JSON run configuration. Angles are given in degrees and converted to
//! radians when the model is built.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ControlGains, DynamicsParams, SimulationOptions, VehicleState, GRAVITY};
use crate::error::{Result, SailError};
use crate::geometry::{mass_properties, MassModel, SailShape};
use crate::radiation::BeamProfile;
use crate::roa::SamplingOptions;
use crate::stability::{InternalOptions, PowerMode, TaylorOptions, N_INTERNAL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SailConfig {
    Cone {
        base_radius: f64,
        cone_angle_deg: f64,
    },
    Polynomial {
        base_radius: f64,
        coefficients: [f64; 5],
    },
    SphericalCap {
        cap_base_radius: f64,
        curvature_radius: f64,
    },
}

impl SailConfig {
    pub fn shape(&self) -> SailShape {
        match *self {
            SailConfig::Cone {
                base_radius,
                cone_angle_deg,
            } => SailShape::cone(base_radius, cone_angle_deg.to_radians()),
            SailConfig::Polynomial {
                base_radius,
                coefficients,
            } => SailShape::Polynomial {
                base_radius,
                coefficients,
            },
            SailConfig::SphericalCap {
                cap_base_radius,
                curvature_radius,
            } => SailShape::spherical_cap(cap_base_radius, curvature_radius),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MassConfig {
    /// kg
    pub sail_mass: f64,
    /// kg
    pub payload_mass: f64,
    /// m
    pub mast_length: f64,
}

impl Default for MassConfig {
    fn default() -> Self {
        MassConfig {
            sail_mass: 0.01,
            payload_mass: 0.01,
            mast_length: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeamConfig {
    /// Full width at half maximum, m. Defaults to the sail's base radius.
    pub fwhm: Option<f64>,
}

/// Upper entries of the translational damping matrix, kg/s; the lower
/// off-diagonal entries are their negatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DampingConfig {
    pub d11: f64,
    pub d12: f64,
    pub d13: f64,
    pub d22: f64,
    pub d23: f64,
    pub d33: f64,
}

impl Default for DampingConfig {
    fn default() -> Self {
        DampingConfig {
            d11: 0.01,
            d12: 0.01,
            d13: 0.0,
            d22: 0.01,
            d23: 0.0,
            d33: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GainsConfig {
    pub kp: f64,
    pub kd: f64,
}

impl Default for GainsConfig {
    fn default() -> Self {
        let g = ControlGains::default();
        GainsConfig { kp: g.kp, kd: g.kd }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub n_radial: usize,
    pub n_azimuthal: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        MeshConfig {
            n_radial: 200,
            n_azimuthal: 200,
        }
    }
}

/// Initial state for `simulate`. Positions in m (height defaults to the
/// setpoint), angles in degrees, rates in m/s and deg/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConfig {
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
    pub yaw_deg: f64,
    pub pitch_deg: f64,
    pub roll_deg: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub wx_deg_s: f64,
    pub wy_deg_s: f64,
    pub wz_deg_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    /// s
    pub dt: f64,
    /// s
    pub t_end: f64,
    /// Tilt beyond which a run is reported as diverged, deg.
    pub max_tilt_deg: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        let o = SimulationOptions::default();
        IntegratorConfig {
            dt: o.dt,
            t_end: o.t_end,
            max_tilt_deg: o.max_tilt.to_degrees(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilityConfig {
    /// Fixed body spin about z, rad/s.
    pub spin: f64,
    /// `fixed-hover` or `live`.
    pub power_mode: PowerModeConfig,
    /// Taylor stencil half-width for positions (m), angles (rad) and rates.
    pub taylor_radius: f64,
    pub taylor_pairs: usize,
    pub taylor_tolerance: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        let t = TaylorOptions::default();
        StabilityConfig {
            spin: 0.0,
            power_mode: PowerModeConfig::FixedHover,
            taylor_radius: t.radius[0],
            taylor_pairs: t.pairs,
            taylor_tolerance: t.tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerModeConfig {
    #[default]
    FixedHover,
    Live,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoaConfig {
    pub n_samples: usize,
    pub refinements: usize,
    pub rel_tol: f64,
    pub rho_upper: f64,
    pub rho_min: f64,
    /// Total degree of the SOS multiplier.
    pub multiplier_degree: u32,
    /// Points per projected boundary curve.
    pub boundary_points: usize,
}

impl Default for RoaConfig {
    fn default() -> Self {
        let s = SamplingOptions::default();
        RoaConfig {
            n_samples: s.n_samples,
            refinements: s.refinements,
            rel_tol: s.rel_tol,
            rho_upper: s.rho_upper,
            rho_min: s.rho_min,
            multiplier_degree: 2,
            boundary_points: 200,
        }
    }
}

impl RoaConfig {
    pub fn sampling(&self) -> SamplingOptions {
        SamplingOptions {
            n_samples: self.n_samples,
            refinements: self.refinements,
            rel_tol: self.rel_tol,
            rho_upper: self.rho_upper,
            rho_min: self.rho_min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// deg, cone sails only
    ConeAngle,
    MastLength,
    SailMass,
    PayloadMass,
    Spin,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::ConeAngle => "cone_angle",
            SweepParameter::MastLength => "mast_length",
            SweepParameter::SailMass => "sail_mass",
            SweepParameter::PayloadMass => "payload_mass",
            SweepParameter::Spin => "spin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    Hurwitz,
    SpectralAbscissa,
    Rho,
    Extents,
}

impl SweepMetric {
    pub const ALL: [SweepMetric; 4] = [
        SweepMetric::Hurwitz,
        SweepMetric::SpectralAbscissa,
        SweepMetric::Rho,
        SweepMetric::Extents,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    #[serde(default = "all_metrics")]
    pub metrics: Vec<SweepMetric>,
}

fn all_metrics() -> Vec<SweepMetric> {
    SweepMetric::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub sail: SailConfig,
    #[serde(default)]
    pub mass: MassConfig,
    #[serde(default)]
    pub beam: BeamConfig,
    #[serde(default)]
    pub damping: DampingConfig,
    /// Levitation setpoint, m.
    #[serde(default = "default_z_d")]
    pub z_d: f64,
    #[serde(default)]
    pub gains: GainsConfig,
    /// Rays per side of the beam grid.
    #[serde(default = "default_rays")]
    pub rays: usize,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub stability: StabilityConfig,
    #[serde(default)]
    pub roa: RoaConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

fn default_z_d() -> f64 {
    10.0
}

fn default_rays() -> usize {
    100
}

fn default_output_dir() -> String {
    "out".into()
}

fn bad(field: &str, reason: impl Into<String>) -> SailError {
    SailError::config(field, reason)
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(bad(field, "must be finite"))
    }
}

impl RunConfig {
    /// The cone α = 40°, R = 1 m, l = 2 m vehicle with 10 g sail and payload.
    pub fn reference_cone() -> Self {
        RunConfig {
            sail: SailConfig::Cone {
                base_radius: 1.0,
                cone_angle_deg: 40.0,
            },
            mass: MassConfig::default(),
            beam: BeamConfig::default(),
            damping: DampingConfig::default(),
            z_d: default_z_d(),
            gains: GainsConfig::default(),
            rays: default_rays(),
            mesh: MeshConfig::default(),
            initial: InitialConfig::default(),
            integrator: IntegratorConfig::default(),
            stability: StabilityConfig::default(),
            roa: RoaConfig::default(),
            sweep: None,
            output_dir: default_output_dir(),
        }
    }

    /// Spherical cap with a = 0.5 m, R = 1 m and a 2.3 m mast.
    pub fn reference_cap() -> Self {
        RunConfig {
            sail: SailConfig::SphericalCap {
                cap_base_radius: 0.5,
                curvature_radius: 1.0,
            },
            mass: MassConfig {
                mast_length: 2.3,
                ..MassConfig::default()
            },
            ..Self::reference_cone()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| bad("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self.sail {
            SailConfig::Cone {
                base_radius,
                cone_angle_deg,
            } => {
                positive("sail.base_radius", base_radius)?;
                if !(cone_angle_deg > 0.0 && cone_angle_deg <= 80.0) {
                    return Err(bad(
                        "sail.cone_angle_deg",
                        format!("must lie in (0, 80] degrees, got {cone_angle_deg}"),
                    ));
                }
            }
            SailConfig::Polynomial {
                base_radius,
                coefficients,
            } => {
                positive("sail.base_radius", base_radius)?;
                for (k, c) in coefficients.iter().enumerate() {
                    finite(&format!("sail.coefficients[{k}]"), *c)?;
                }
            }
            SailConfig::SphericalCap {
                cap_base_radius,
                curvature_radius,
            } => {
                positive("sail.cap_base_radius", cap_base_radius)?;
                positive("sail.curvature_radius", curvature_radius)?;
                if cap_base_radius >= curvature_radius {
                    return Err(bad("sail.cap_base_radius", "must be smaller than curvature_radius"));
                }
            }
        }
        self.sail
            .shape()
            .validate()
            .map_err(|e| bad("sail", e.to_string()))?;

        positive("mass.sail_mass", self.mass.sail_mass)?;
        if !(self.mass.payload_mass >= 0.0 && self.mass.payload_mass.is_finite()) {
            return Err(bad("mass.payload_mass", "must be non-negative"));
        }
        if !(self.mass.mast_length >= 0.0 && self.mass.mast_length.is_finite()) {
            return Err(bad("mass.mast_length", "must be non-negative"));
        }
        if let Some(w) = self.beam.fwhm {
            positive("beam.fwhm", w)?;
        }
        let d = &self.damping;
        for (name, v) in [
            ("damping.d11", d.d11),
            ("damping.d12", d.d12),
            ("damping.d13", d.d13),
            ("damping.d22", d.d22),
            ("damping.d23", d.d23),
            ("damping.d33", d.d33),
        ] {
            finite(name, v)?;
        }
        finite("z_d", self.z_d)?;
        finite("gains.kp", self.gains.kp)?;
        finite("gains.kd", self.gains.kd)?;
        if self.rays < crate::radiation::MIN_RAYS_PER_SIDE {
            return Err(bad(
                "rays",
                format!("need at least {} rays per side", crate::radiation::MIN_RAYS_PER_SIDE),
            ));
        }
        if self.mesh.n_radial < 2 || self.mesh.n_azimuthal < 2 {
            return Err(bad("mesh", "n_radial and n_azimuthal must be at least 2"));
        }
        let i = &self.initial;
        for (name, v) in [
            ("initial.x", i.x),
            ("initial.y", i.y),
            ("initial.z", i.z.unwrap_or(0.0)),
            ("initial.yaw_deg", i.yaw_deg),
            ("initial.pitch_deg", i.pitch_deg),
            ("initial.roll_deg", i.roll_deg),
            ("initial.vx", i.vx),
            ("initial.vy", i.vy),
            ("initial.vz", i.vz),
            ("initial.wx_deg_s", i.wx_deg_s),
            ("initial.wy_deg_s", i.wy_deg_s),
            ("initial.wz_deg_s", i.wz_deg_s),
        ] {
            finite(name, v)?;
        }
        positive("integrator.dt", self.integrator.dt)?;
        positive("integrator.t_end", self.integrator.t_end)?;
        if self.integrator.dt > self.integrator.t_end {
            return Err(bad("integrator.dt", "must not exceed t_end"));
        }
        if !(self.integrator.max_tilt_deg > 0.0 && self.integrator.max_tilt_deg < 90.0) {
            return Err(bad("integrator.max_tilt_deg", "must lie in (0, 90)"));
        }
        finite("stability.spin", self.stability.spin)?;
        positive("stability.taylor_radius", self.stability.taylor_radius)?;
        positive("stability.taylor_tolerance", self.stability.taylor_tolerance)?;
        if self.stability.taylor_pairs < 1 {
            return Err(bad("stability.taylor_pairs", "must be positive"));
        }
        let s = &self.roa;
        if s.n_samples < 2 {
            return Err(bad("roa.n_samples", "need at least 2"));
        }
        positive("roa.rel_tol", s.rel_tol)?;
        positive("roa.rho_min", s.rho_min)?;
        positive("roa.rho_upper", s.rho_upper)?;
        if s.rho_upper <= s.rho_min {
            return Err(bad("roa.rho_upper", "must exceed rho_min"));
        }
        if self.roa.boundary_points < 3 {
            return Err(bad("roa.boundary_points", "need at least 3"));
        }
        if self.output_dir.is_empty() {
            return Err(bad("output_dir", "must not be empty"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.len() < 2 {
                return Err(bad("sweep.values", "a sweep needs at least two values"));
            }
            if sweep.metrics.is_empty() {
                return Err(bad("sweep.metrics", "select at least one metric"));
            }
            if sweep.parameter == SweepParameter::ConeAngle && !matches!(self.sail, SailConfig::Cone { .. }) {
                return Err(bad("sweep.parameter", "cone_angle requires a cone sail"));
            }
            for &v in &sweep.values {
                let mut probe = self.with_parameter(sweep.parameter, v)?;
                probe.sweep = None;
                probe
                    .validate()
                    .map_err(|e| bad("sweep.values", format!("value {v}: {e}")))?;
            }
        }
        Ok(())
    }

    /// Copy of this config with one parameter replaced.
    pub fn with_parameter(&self, parameter: SweepParameter, value: f64) -> Result<RunConfig> {
        let mut cfg = self.clone();
        match parameter {
            SweepParameter::ConeAngle => match &mut cfg.sail {
                SailConfig::Cone { cone_angle_deg, .. } => *cone_angle_deg = value,
                _ => return Err(bad("sweep.parameter", "cone_angle requires a cone sail")),
            },
            SweepParameter::MastLength => cfg.mass.mast_length = value,
            SweepParameter::SailMass => cfg.mass.sail_mass = value,
            SweepParameter::PayloadMass => cfg.mass.payload_mass = value,
            SweepParameter::Spin => cfg.stability.spin = value,
        }
        Ok(cfg)
    }

    pub fn base_radius(&self) -> f64 {
        self.sail.shape().rim_radius()
    }

    pub fn mass_model(&self) -> MassModel {
        MassModel {
            sail_mass: self.mass.sail_mass,
            payload_mass: self.mass.payload_mass,
            mast_length: self.mass.mast_length,
        }
    }

    pub fn dynamics_params(&self) -> Result<DynamicsParams> {
        let shape = self.sail.shape();
        let props = mass_properties(&shape, &self.mass_model(), self.mesh.n_radial, self.mesh.n_azimuthal)?;
        let fwhm = self.beam.fwhm.unwrap_or_else(|| self.base_radius());
        let d = &self.damping;
        Ok(DynamicsParams {
            shape,
            props,
            beam: BeamProfile::with_fwhm(0.0, fwhm),
            damping: DynamicsParams::damping_from_entries(d.d11, d.d12, d.d13, d.d22, d.d23, d.d33),
            gravity: Vector3::new(0.0, 0.0, -GRAVITY),
            z_d: self.z_d,
            n_rays: self.rays,
            gains: ControlGains {
                kp: self.gains.kp,
                kd: self.gains.kd,
            },
        })
    }

    pub fn initial_state(&self) -> VehicleState {
        let i = &self.initial;
        VehicleState {
            x: i.x,
            y: i.y,
            z: i.z.unwrap_or(self.z_d),
            psi: i.yaw_deg.to_radians(),
            theta: i.pitch_deg.to_radians(),
            phi: i.roll_deg.to_radians(),
            vx: i.vx,
            vy: i.vy,
            vz: i.vz,
            wx: i.wx_deg_s.to_radians(),
            wy: i.wy_deg_s.to_radians(),
            wz: i.wz_deg_s.to_radians(),
        }
    }

    pub fn simulation_options(&self) -> SimulationOptions {
        SimulationOptions {
            dt: self.integrator.dt,
            t_end: self.integrator.t_end,
            max_tilt: self.integrator.max_tilt_deg.to_radians(),
        }
    }

    pub fn internal_options(&self) -> InternalOptions {
        InternalOptions {
            spin: self.stability.spin,
            power_mode: match self.stability.power_mode {
                PowerModeConfig::FixedHover => PowerMode::FixedHover,
                PowerModeConfig::Live => PowerMode::Live,
            },
            ..InternalOptions::default()
        }
    }

    pub fn taylor_options(&self) -> TaylorOptions {
        TaylorOptions {
            radius: [self.stability.taylor_radius; N_INTERNAL],
            pairs: self.stability.taylor_pairs,
            tolerance: self.stability.taylor_tolerance,
            internal: self.internal_options(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_takes_defaults() {
        let cfg = RunConfig::from_json(r#"{"sail": {"kind": "cone", "base_radius": 1, "cone_angle_deg": 40}}"#).unwrap();
        assert_eq!(cfg, RunConfig::reference_cone());
    }

    #[test]
    fn print_round_trip() {
        let mut cfg = RunConfig::reference_cap();
        cfg.sweep = Some(SweepSpec {
            parameter: SweepParameter::MastLength,
            values: vec![2.3, 2.5],
            metrics: vec![SweepMetric::Rho],
        });
        cfg.initial.roll_deg = 10.0;
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        for doc in [
            r#"{"sail": {"kind": "cone", "base_radius": 1, "cone_angle_deg": 40}, "colour": 1}"#,
            r#"{"sail": {"kind": "cone", "base_radius": 1, "cone_angle_deg": 40, "h": 1}}"#,
            r#"{"sail": {"kind": "cone", "base_radius": 1, "cone_angle_deg": 40}, "roa": {"samples": 5}}"#,
        ] {
            assert!(matches!(RunConfig::from_json(doc), Err(SailError::Config { .. })), "{doc}");
        }
    }

    #[test]
    fn steep_cone_names_the_field() {
        let err = RunConfig::from_json(r#"{"sail": {"kind": "cone", "base_radius": 1, "cone_angle_deg": 95}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("cone_angle_deg"), "{err}");
    }

    #[test]
    fn single_value_sweep_rejected() {
        let mut cfg = RunConfig::reference_cone();
        cfg.sweep = Some(SweepSpec {
            parameter: SweepParameter::ConeAngle,
            values: vec![40.0],
            metrics: all_metrics(),
        });
        assert!(matches!(cfg.validate(), Err(SailError::Config { .. })));
    }

    #[test]
    fn cone_angle_sweep_needs_cone() {
        let mut cfg = RunConfig::reference_cap();
        cfg.sweep = Some(SweepSpec {
            parameter: SweepParameter::ConeAngle,
            values: vec![40.0, 45.0],
            metrics: all_metrics(),
        });
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn fwhm_defaults_to_base_radius() {
        let p = RunConfig::reference_cap().dynamics_params().unwrap();
        assert!((p.beam.fwhm() - 0.5).abs() < 1e-12);
        assert_eq!(p.damping[(1, 0)], -0.01);
    }

    #[test]
    fn degrees_become_radians() {
        let mut cfg = RunConfig::reference_cone();
        cfg.initial.roll_deg = 90.0;
        assert!((cfg.initial_state().phi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(cfg.initial_state().z, 10.0);
    }
}
