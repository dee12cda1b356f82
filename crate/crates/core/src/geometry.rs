//! Sail shapes, surface discretization, and rigid-body mass properties.
//!
//! The sail is a surface of revolution `z = g_s(r)` about the body z axis,
//! where `r` is the distance from the axis and the base plane `z = 0` passes
//! through the rim. Coordinates in this module are base-centered: the origin
//! is the center of the base disc. Mass properties report the vehicle center
//! of mass (CM) as an offset along body z so other modules can shift into
//! CM-centered body coordinates.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SailError};

/// Sweep curve that generates the sail when revolved about body z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SailShape {
    /// `g_s(x) = c0 + c1 (x/R) + c2 (x/R)^2 + c3 (x/R)^3 + c4 (x/R)^4`.
    Polynomial {
        base_radius: f64,
        coefficients: [f64; 5],
    },
    /// `g_s(x) = sqrt(R^2 - x^2) - sqrt(R^2 - a^2)` with cap base radius `a`
    /// and curvature radius `R`.
    SphericalCap {
        cap_base_radius: f64,
        curvature_radius: f64,
    },
}

impl SailShape {
    /// Cone with base radius `r` and surface-to-base angle `alpha` (rad).
    pub fn cone(base_radius: f64, alpha: f64) -> Self {
        let t = base_radius * alpha.tan();
        SailShape::Polynomial {
            base_radius,
            coefficients: [t, -t, 0.0, 0.0, 0.0],
        }
    }

    pub fn flat_disc(base_radius: f64) -> Self {
        SailShape::Polynomial {
            base_radius,
            coefficients: [0.0; 5],
        }
    }

    pub fn spherical_cap(cap_base_radius: f64, curvature_radius: f64) -> Self {
        SailShape::SphericalCap {
            cap_base_radius,
            curvature_radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SailShape::Polynomial {
                base_radius,
                coefficients,
            } => {
                if !(base_radius > 0.0 && base_radius.is_finite()) {
                    return Err(SailError::invalid("base_radius", "must be positive and finite"));
                }
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(SailError::invalid("coefficients", "must be finite"));
                }
            }
            SailShape::SphericalCap {
                cap_base_radius,
                curvature_radius,
            } => {
                if !(cap_base_radius > 0.0 && cap_base_radius.is_finite()) {
                    return Err(SailError::invalid("cap_base_radius", "must be positive and finite"));
                }
                if !(curvature_radius > cap_base_radius && curvature_radius.is_finite()) {
                    return Err(SailError::invalid(
                        "curvature_radius",
                        "must exceed the cap base radius",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Radius of the sail rim (the `R` of the polynomial kind, `a` of the cap).
    pub fn rim_radius(&self) -> f64 {
        match *self {
            SailShape::Polynomial { base_radius, .. } => base_radius,
            SailShape::SphericalCap {
                cap_base_radius, ..
            } => cap_base_radius,
        }
    }

    /// Largest radius at which the sweep curve may be evaluated past the rim.
    /// The ray tracer uses a thin band beyond the rim for edge coverage.
    pub(crate) fn extension_limit(&self) -> f64 {
        match *self {
            SailShape::Polynomial { base_radius, .. } => 2.0 * base_radius,
            SailShape::SphericalCap {
                curvature_radius, ..
            } => 0.999 * curvature_radius,
        }
    }

    /// `g_s(x)` for `0 <= x <= rim radius`.
    pub fn sweep_height(&self, x: f64) -> Result<f64> {
        let rim = self.rim_radius();
        if !(0.0..=rim).contains(&x) {
            return Err(SailError::Domain(format!(
                "sweep radius {x} outside [0, {rim}]"
            )));
        }
        Ok(self.height(x))
    }

    /// Unchecked sweep height; also valid up to `extension_limit`.
    #[inline]
    pub(crate) fn height(&self, x: f64) -> f64 {
        match *self {
            SailShape::Polynomial {
                base_radius,
                coefficients: c,
            } => {
                let s = x / base_radius;
                c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * c[4])))
            }
            SailShape::SphericalCap {
                cap_base_radius: a,
                curvature_radius: r,
            } => (r * r - x * x).sqrt() - (r * r - a * a).sqrt(),
        }
    }

    /// `g_s'(x)`, unchecked.
    #[inline]
    pub(crate) fn slope(&self, x: f64) -> f64 {
        match *self {
            SailShape::Polynomial {
                base_radius,
                coefficients: c,
            } => {
                let s = x / base_radius;
                (c[1] + s * (2.0 * c[2] + s * (3.0 * c[3] + s * 4.0 * c[4]))) / base_radius
            }
            SailShape::SphericalCap {
                curvature_radius: r,
                ..
            } => -x / (r * r - x * x).sqrt(),
        }
    }

    /// Upper bound on `|g_s'|` over `[0, upto]`, sampled densely.
    pub(crate) fn max_abs_slope(&self, upto: f64) -> f64 {
        const N: usize = 256;
        (0..=N)
            .map(|i| self.slope(upto * i as f64 / N as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Outward unit normal at base-centered point `(x, y)` on the surface,
    /// oriented so that its body-z component is positive.
    #[inline]
    pub(crate) fn normal_at(&self, x: f64, y: f64) -> Vector3<f64> {
        let rho = (x * x + y * y).sqrt();
        if rho < 1e-14 {
            return Vector3::z();
        }
        let gp = self.slope(rho);
        let n = Vector3::new(-gp * x / rho, -gp * y / rho, 1.0);
        n / (1.0 + gp * gp).sqrt()
    }

    /// Analytic surface area where a closed form exists (flat disc, cone,
    /// spherical cap).
    pub fn analytic_area(&self) -> Option<f64> {
        use std::f64::consts::PI;
        match *self {
            SailShape::Polynomial {
                base_radius,
                coefficients: c,
            } if c[2] == 0.0 && c[3] == 0.0 && c[4] == 0.0 && c[0] == -c[1] => {
                let slope = c[1] / base_radius;
                Some(PI * base_radius * base_radius * (1.0 + slope * slope).sqrt())
            }
            SailShape::SphericalCap {
                cap_base_radius: a,
                curvature_radius: r,
            } => {
                let h = r - (r * r - a * a).sqrt();
                Some(2.0 * PI * r * h)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassModel {
    /// kg
    pub sail_mass: f64,
    /// kg, point mass at the mast tip
    pub payload_mass: f64,
    /// m, measured from the sail base center along -z_b
    pub mast_length: f64,
}

impl MassModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sail_mass > 0.0 && self.sail_mass.is_finite()) {
            return Err(SailError::invalid("sail_mass", "must be positive"));
        }
        if !(self.payload_mass >= 0.0 && self.payload_mass.is_finite()) {
            return Err(SailError::invalid("payload_mass", "must be non-negative"));
        }
        if !(self.mast_length >= 0.0 && self.mast_length.is_finite()) {
            return Err(SailError::invalid("mast_length", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceElement {
    /// Base-centered body coordinates of the element centroid.
    pub centroid: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub area: f64,
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub elements: Vec<SurfaceElement>,
}

impl SurfaceMesh {
    pub fn total_area(&self) -> f64 {
        self.elements.iter().map(|e| e.area).sum()
    }

    /// Element centroids relative to the vehicle CM.
    pub fn lever_arms(&self, props: &MassProperties) -> Vec<Vector3<f64>> {
        let shift = Vector3::new(0.0, 0.0, props.cm_offset);
        self.elements.iter().map(|e| e.centroid - shift).collect()
    }
}

/// Polar-grid discretization of the sail surface (midpoint rule in radius
/// and azimuth).
pub fn build_mesh(shape: &SailShape, n_radial: usize, n_azimuthal: usize) -> Result<SurfaceMesh> {
    shape.validate()?;
    if n_radial < 2 || n_azimuthal < 2 {
        return Err(SailError::invalid(
            "mesh resolution",
            "n_radial and n_azimuthal must be at least 2",
        ));
    }
    let rim = shape.rim_radius();
    let dr = rim / n_radial as f64;
    let dbeta = std::f64::consts::TAU / n_azimuthal as f64;
    let mut elements = Vec::with_capacity(n_radial * n_azimuthal);
    for i in 0..n_radial {
        let r = (i as f64 + 0.5) * dr;
        let gp = shape.slope(r);
        if !gp.is_finite() {
            return Err(SailError::Discretization { radius: r });
        }
        let z = shape.height(r);
        let area = r * dr * dbeta * (1.0 + gp * gp).sqrt();
        for j in 0..n_azimuthal {
            let beta = (j as f64 + 0.5) * dbeta;
            let (s, c) = beta.sin_cos();
            let (x, y) = (r * c, r * s);
            elements.push(SurfaceElement {
                centroid: Vector3::new(x, y, z),
                normal: shape.normal_at(x, y),
                area,
            });
        }
    }
    Ok(SurfaceMesh { elements })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassProperties {
    pub total_mass: f64,
    /// CM position along body z relative to the sail base center.
    pub cm_offset: f64,
    /// Inertia about the CM in body axes.
    pub inertia: Matrix3<f64>,
}

/// Uniform areal density over the sail, point payload at `-l` on the axis,
/// massless mast.
pub fn mass_properties(
    shape: &SailShape,
    mass: &MassModel,
    n_radial: usize,
    n_azimuthal: usize,
) -> Result<MassProperties> {
    mass.validate()?;
    let mesh = build_mesh(shape, n_radial, n_azimuthal)?;
    let area = mesh.total_area();
    let density = mass.sail_mass / area;

    let payload = Vector3::new(0.0, 0.0, -mass.mast_length);
    let total = mass.sail_mass + mass.payload_mass;
    let mut first_moment = payload * mass.payload_mass;
    for e in &mesh.elements {
        first_moment += e.centroid * (density * e.area);
    }
    let cm = first_moment / total;

    let point_inertia = |r: Vector3<f64>, m: f64| -> Matrix3<f64> {
        (Matrix3::identity() * r.norm_squared() - r * r.transpose()) * m
    };
    let mut inertia = point_inertia(payload - cm, mass.payload_mass);
    for e in &mesh.elements {
        inertia += point_inertia(e.centroid - cm, density * e.area);
    }
    // exact symmetry; the sums above differ only by rounding
    inertia = (inertia + inertia.transpose()) * 0.5;

    Ok(MassProperties {
        total_mass: total,
        cm_offset: cm.z,
        inertia,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn conical_sweep_endpoints() {
        let cone = SailShape::cone(1.0, FRAC_PI_4);
        assert_relative_eq!(cone.sweep_height(0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(cone.sweep_height(1.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn spherical_cap_apex_height() {
        let cap = SailShape::spherical_cap(0.5, 1.0);
        assert_relative_eq!(cap.sweep_height(0.0).unwrap(), 1.0 - 0.75f64.sqrt(), epsilon = 1e-15);
        assert!((cap.sweep_height(0.0).unwrap() - 0.1340).abs() < 1e-4);
        assert_relative_eq!(cap.sweep_height(0.5).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sweep_outside_base_is_domain_error() {
        let cone = SailShape::cone(1.0, 0.5);
        assert!(matches!(cone.sweep_height(1.01), Err(SailError::Domain(_))));
        assert!(matches!(cone.sweep_height(-0.1), Err(SailError::Domain(_))));
    }

    #[test]
    fn invalid_cap_rejected() {
        assert!(SailShape::spherical_cap(1.0, 0.9).validate().is_err());
        assert!(build_mesh(&SailShape::spherical_cap(1.0, 1.0), 4, 4).is_err());
    }

    #[test]
    fn flat_disc_normals_and_area() {
        let mesh = build_mesh(&SailShape::flat_disc(1.0), 200, 200).unwrap();
        for e in &mesh.elements {
            assert_eq!(e.normal, Vector3::z());
        }
        assert!((mesh.total_area() - PI).abs() / PI < 1e-3);
    }

    #[test]
    fn conical_normals_have_cos_alpha_z() {
        let alpha = 40f64.to_radians();
        let mesh = build_mesh(&SailShape::cone(1.0, alpha), 20, 24).unwrap();
        // oracle: n_z = 1 / sqrt(1 + tan^2 alpha)
        let nz = 1.0 / (1.0 + alpha.tan().powi(2)).sqrt();
        for e in &mesh.elements {
            assert!((e.normal.norm() - 1.0).abs() < 1e-12);
            assert_relative_eq!(e.normal.z, nz, epsilon = 1e-12);
            // normals lean away from the axis on the concave underside
            let radial = Vector3::new(e.centroid.x, e.centroid.y, 0.0).normalize();
            assert!(e.normal.dot(&radial) > 0.0);
        }
    }

    #[test]
    fn mesh_area_converges_for_cap() {
        let cap = SailShape::spherical_cap(0.5, 1.0);
        let exact = cap.analytic_area().unwrap();
        let coarse = (build_mesh(&cap, 10, 64).unwrap().total_area() - exact).abs();
        let fine = (build_mesh(&cap, 80, 64).unwrap().total_area() - exact).abs();
        assert!(fine < coarse);
        assert!(fine / exact < 1e-3);
    }

    #[test]
    fn total_mass_is_sum() {
        let m = MassModel {
            sail_mass: 0.01,
            payload_mass: 0.01,
            mast_length: 2.0,
        };
        let p = mass_properties(&SailShape::cone(1.0, 0.7), &m, 40, 40).unwrap();
        assert_eq!(p.total_mass, 0.02);
    }

    #[test]
    fn no_payload_keeps_cm_on_sail() {
        let shape = SailShape::cone(1.0, 40f64.to_radians());
        let m = MassModel {
            sail_mass: 0.01,
            payload_mass: 0.0,
            mast_length: 2.0,
        };
        let p = mass_properties(&shape, &m, 60, 60).unwrap();
        assert_eq!(p.total_mass, 0.01);
        let top = shape.sweep_height(0.0).unwrap();
        assert!(p.cm_offset > 0.0 && p.cm_offset < top);
        // uniform cone shell: centroid at one third of the height
        assert!((p.cm_offset - top / 3.0).abs() < 1e-3);
    }

    #[test]
    fn flat_disc_inertia_matches_thin_disc() {
        let m = MassModel {
            sail_mass: 0.01,
            payload_mass: 0.0,
            mast_length: 0.0,
        };
        let p = mass_properties(&SailShape::flat_disc(1.0), &m, 200, 200).unwrap();
        let jz = p.inertia[(2, 2)];
        assert!((jz - 5e-3).abs() / 5e-3 < 5e-3, "J_z = {jz}");
        // perpendicular-axis theorem for a lamina
        assert_relative_eq!(p.inertia[(0, 0)] + p.inertia[(1, 1)], jz, max_relative = 1e-9);
    }

    #[test]
    fn axisymmetric_inertia_is_diagonal_and_balanced() {
        let m = MassModel {
            sail_mass: 0.01,
            payload_mass: 0.01,
            mast_length: 2.3,
        };
        for shape in [SailShape::cone(1.0, 0.8), SailShape::spherical_cap(0.5, 1.0)] {
            let p = mass_properties(&shape, &m, 50, 64).unwrap();
            let j = p.inertia;
            assert!(((j[(0, 0)] - j[(1, 1)]) / j[(0, 0)]).abs() < 1e-9);
            for (r, c) in [(0, 1), (0, 2), (1, 2)] {
                assert!(j[(r, c)].abs() < 1e-12 * j[(0, 0)]);
            }
            assert!(j.symmetric_eigenvalues().iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn inertia_converges_with_resolution() {
        // oracle: thin conical shell about its own axis, J_z = m R^2 / 2
        let shape = SailShape::cone(1.0, 0.6);
        let m = MassModel {
            sail_mass: 1.0,
            payload_mass: 0.0,
            mast_length: 0.0,
        };
        let err = |n| (mass_properties(&shape, &m, n, 64).unwrap().inertia[(2, 2)] - 0.5).abs();
        let (e1, e2) = (err(10), err(40));
        assert!(e2 < e1 / 4.0, "{e1} {e2}");
    }

    proptest::proptest! {
        #[test]
        fn conical_sweep_is_linear(alpha in 0.0f64..1.5, x1 in 0.0f64..1.0, x2 in 0.0f64..1.0) {
            let cone = SailShape::cone(1.0, alpha);
            let lhs = cone.sweep_height(x1).unwrap() + cone.sweep_height(x2).unwrap();
            let rhs = 2.0 * cone.sweep_height(0.5 * (x1 + x2)).unwrap();
            proptest::prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }
}
