use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepMetric, SweepSpec};
use crate::dynamics::{simulate, Trajectory, VehicleState};
use crate::error::{Result, SailError};
use crate::io::{matrix_csv, sig9};
use crate::roa::{
    assemble_sos, estimate_rho_sampling, export_sdpa, project_ellipsoid, Projection, RoaEstimate, RoaStatus,
    REPORT_PLANES,
};
use crate::stability::{
    eigenvalues, is_hurwitz, linearize_internal, solve_lyapunov, taylor_expand_internal, HurwitzReport, LinearModel,
    QuadraticLyapunov, TaylorExpansion, INTERNAL_NAMES, N_INTERNAL,
};
use crate::svg;

fn write(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn plane_name(plane: (usize, usize)) -> String {
    format!("{}_{}", INTERNAL_NAMES[plane.0], INTERNAL_NAMES[plane.1])
}

#[derive(Debug)]
pub struct SimulateReport {
    pub trajectory: Trajectory,
    pub files: Vec<PathBuf>,
}

fn write_trajectory(traj: &Trajectory, out: &Path, files: &mut Vec<PathBuf>) -> Result<()> {
    write(out, "trajectory.csv", &traj.to_csv(), files)?;
    let mut panels: Vec<(String, Vec<(f64, f64)>)> = VehicleState::NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            (
                name.to_string(),
                traj.rows.iter().map(|r| (r.t, r.state.to_array()[k])).collect(),
            )
        })
        .collect();
    panels.push(("u [W]".into(), traj.rows.iter().map(|r| (r.t, r.control.power)).collect()));
    write(
        out,
        "trajectory.svg",
        &svg::time_series("Closed-loop state histories", "t [s]", &panels, 2000),
        files,
    )
}

/// Closed-loop rollout from the configured initial state. On failure the
/// partial trajectory is still written before the error is returned.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<SimulateReport> {
    let params = cfg.dynamics_params()?;
    std::fs::create_dir_all(out)?;
    let mut files = Vec::new();
    match simulate(&cfg.initial_state(), &params, &cfg.simulation_options()) {
        Ok(trajectory) => {
            write_trajectory(&trajectory, out, &mut files)?;
            Ok(SimulateReport { trajectory, files })
        }
        Err(SailError::Simulation { time, cause, partial }) => {
            write_trajectory(&partial, out, &mut files)?;
            Err(SailError::Simulation { time, cause, partial })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone)]
pub struct LinearizeReport {
    pub model: LinearModel,
    pub hurwitz: HurwitzReport,
    pub eigenvalues: Vec<Complex<f64>>,
    /// Present when `A` is Hurwitz (`Q = I`).
    pub lyapunov: Option<QuadraticLyapunov>,
    pub files: Vec<PathBuf>,
}

fn sorted_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let mut ev = eigenvalues(a)?;
    ev.sort_by(|p, q| q.re.total_cmp(&p.re).then(q.im.total_cmp(&p.im)));
    Ok(ev)
}

fn linear_summary_csv(model: &LinearModel, hurwitz: &HurwitzReport) -> String {
    let mut s = String::from("quantity,value\n");
    for (k, v) in model.coefficients().iter().enumerate() {
        let _ = writeln!(s, "A{},{}", k + 1, sig9(*v));
    }
    for (k, v) in model.symmetry_residuals().iter().enumerate() {
        let _ = writeln!(s, "symmetry_residual_{},{}", k + 1, sig9(*v));
    }
    let _ = writeln!(s, "hover_power,{}", sig9(model.hover_power));
    let _ = writeln!(s, "spin,{}", sig9(model.spin));
    let _ = writeln!(s, "spectral_abscissa,{}", sig9(hurwitz.abscissa));
    let _ = writeln!(s, "hurwitz,{}", hurwitz.hurwitz);
    s
}

fn eigen_csv(ev: &[Complex<f64>]) -> String {
    let mut s = String::from("re,im\n");
    for l in ev {
        let _ = writeln!(s, "{},{}", sig9(l.re), sig9(l.im));
    }
    s
}

/// Linearization, eigenvalues, Hurwitz verdict, and `P` for `Q = I` when
/// the verdict is positive. A non-Hurwitz `A` is reported, not an error.
pub fn cmd_linearize(cfg: &RunConfig, out: &Path) -> Result<LinearizeReport> {
    let params = cfg.dynamics_params()?;
    let model = linearize_internal(&params, &cfg.internal_options())?;
    let hurwitz = is_hurwitz(&model.a)?;
    let eigenvalues = sorted_eigenvalues(&model.a)?;
    let lyapunov = if hurwitz.hurwitz {
        Some(solve_lyapunov(&model.a, &DMatrix::identity(N_INTERNAL, N_INTERNAL))?)
    } else {
        None
    };
    std::fs::create_dir_all(out)?;
    let mut files = Vec::new();
    write(out, "A.csv", &matrix_csv(&model.a), &mut files)?;
    write(out, "eigenvalues.csv", &eigen_csv(&eigenvalues), &mut files)?;
    write(out, "linearization.csv", &linear_summary_csv(&model, &hurwitz), &mut files)?;
    if let Some(l) = &lyapunov {
        write(out, "P.csv", &matrix_csv(&l.p), &mut files)?;
        write(out, "Q.csv", &matrix_csv(&l.q), &mut files)?;
    }
    Ok(LinearizeReport {
        model,
        hurwitz,
        eigenvalues,
        lyapunov,
        files,
    })
}

#[derive(Debug, Clone)]
pub struct RoaReport {
    pub taylor: TaylorExpansion,
    pub hurwitz: HurwitzReport,
    pub lyapunov: QuadraticLyapunov,
    pub estimate: RoaEstimate,
    pub projections: Vec<Projection>,
    pub files: Vec<PathBuf>,
}

impl RoaReport {
    pub fn projection(&self, plane: (usize, usize)) -> Option<&Projection> {
        self.projections.iter().find(|p| p.plane == plane)
    }
}

/// Degree-3 model, Lyapunov `P`, sampling estimate of `rho`, and the four
/// reporting projections, without writing anything.
pub fn analyze_roa(cfg: &RunConfig) -> Result<RoaReport> {
    let params = cfg.dynamics_params()?;
    let taylor = taylor_expand_internal(&params, &cfg.taylor_options())?;
    let hurwitz = is_hurwitz(&taylor.linear.a)?;
    if !hurwitz.hurwitz {
        return Err(SailError::NotHurwitz {
            abscissa: hurwitz.abscissa,
        });
    }
    let lyapunov = solve_lyapunov(&taylor.linear.a, &DMatrix::identity(N_INTERNAL, N_INTERNAL))?;
    let estimate = estimate_rho_sampling(&lyapunov.p, &taylor.field, &cfg.roa.sampling())?;
    let projections = REPORT_PLANES
        .iter()
        .map(|&plane| project_ellipsoid(&lyapunov.p, estimate.rho, plane, cfg.roa.boundary_points))
        .collect::<Result<_>>()?;
    Ok(RoaReport {
        taylor,
        hurwitz,
        lyapunov,
        estimate,
        projections,
        files: Vec::new(),
    })
}

fn taylor_csv(t: &TaylorExpansion) -> String {
    let mut s = String::from("component");
    for name in INTERNAL_NAMES {
        let _ = write!(s, ",{name}");
    }
    s.push_str(",coefficient\n");
    for (i, comp) in t.field.components.iter().enumerate() {
        for (m, c) in comp.terms() {
            let _ = write!(s, "{}", INTERNAL_NAMES[i]);
            for e in &m.0 {
                let _ = write!(s, ",{e}");
            }
            let _ = writeln!(s, ",{}", sig9(c));
        }
    }
    s
}

fn roa_summary_csv(r: &RoaReport) -> String {
    let e = &r.estimate;
    let status = match e.status {
        RoaStatus::Estimated => "estimated",
        RoaStatus::PossiblyUnbounded => "possibly-unbounded",
    };
    let mut s = String::from("quantity,value\n");
    let _ = writeln!(s, "rho,{}", sig9(e.rho));
    let _ = writeln!(s, "status,{status}");
    let _ = writeln!(s, "method,sampling");
    let _ = writeln!(s, "n_samples,{}", e.n_samples);
    let _ = writeln!(s, "refutation_margin,{}", sig9(e.margin));
    let _ = writeln!(s, "spectral_abscissa,{}", sig9(r.hurwitz.abscissa));
    let _ = writeln!(s, "hover_power,{}", sig9(r.taylor.linear.hover_power));
    let worst = r.taylor.fit_residuals.iter().copied().fold(0.0, f64::max);
    let _ = writeln!(s, "taylor_max_fit_residual,{}", sig9(worst));
    let _ = writeln!(s, "taylor_linear_mismatch,{}", sig9(r.taylor.linear_mismatch));
    let _ = writeln!(s, "taylor_condition,{}", sig9(r.taylor.condition));
    s
}

fn projections_csv(projections: &[Projection]) -> String {
    let mut s = String::from("plane,axis1,axis2,extent1,extent2,semi_major,semi_minor\n");
    for p in projections {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            plane_name(p.plane),
            INTERNAL_NAMES[p.plane.0],
            INTERNAL_NAMES[p.plane.1],
            sig9(p.extents.0),
            sig9(p.extents.1),
            sig9(p.semi_axes.0),
            sig9(p.semi_axes.1)
        );
    }
    s
}

fn boundary_csv(p: &Projection) -> String {
    let mut s = format!("{},{}\n", INTERNAL_NAMES[p.plane.0], INTERNAL_NAMES[p.plane.1]);
    for z in &p.boundary {
        let _ = writeln!(s, "{},{}", sig9(z[0]), sig9(z[1]));
    }
    s
}

fn axis_label(i: usize) -> String {
    let unit = if i < 2 { "m" } else { "rad" };
    format!("{} [{unit}]", INTERNAL_NAMES[i])
}

fn write_roa(report: &mut RoaReport, out: &Path, label: &str) -> Result<()> {
    std::fs::create_dir_all(out)?;
    let mut files = Vec::new();
    write(out, "A.csv", &matrix_csv(&report.taylor.linear.a), &mut files)?;
    write(out, "P.csv", &matrix_csv(&report.lyapunov.p), &mut files)?;
    write(out, "Q.csv", &matrix_csv(&report.lyapunov.q), &mut files)?;
    write(out, "taylor.csv", &taylor_csv(&report.taylor), &mut files)?;
    write(out, "roa_summary.csv", &roa_summary_csv(report), &mut files)?;
    write(out, "roa_projections.csv", &projections_csv(&report.projections), &mut files)?;
    for p in &report.projections {
        let name = plane_name(p.plane);
        write(out, &format!("projection_{name}.csv"), &boundary_csv(p), &mut files)?;
        let svg = svg::regions(
            &format!("ROA projection, {} plane", name.replace('_', "-")),
            &axis_label(p.plane.0),
            &axis_label(p.plane.1),
            &[(label.to_string(), p.boundary.clone())],
        );
        write(out, &format!("projection_{name}.svg"), &svg, &mut files)?;
    }
    report.files = files;
    Ok(())
}

/// Full ROA pipeline with files written to `out`; optionally the SOS program
/// in SDPA sparse format.
pub fn cmd_roa(cfg: &RunConfig, out: &Path, export: Option<&Path>) -> Result<RoaReport> {
    let mut report = analyze_roa(cfg)?;
    write_roa(&mut report, out, "rho level set")?;
    if let Some(path) = export {
        let program = assemble_sos(&report.lyapunov.p, &report.taylor.field, cfg.roa.multiplier_degree)?;
        if let Some(note) = &program.basis_rounding {
            eprintln!("note: {note}");
        }
        export_sdpa(&program.to_sdpa()?, path)?;
        report.files.push(path.to_path_buf());
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub status: String,
    pub hurwitz: Option<bool>,
    pub abscissa: Option<f64>,
    pub rho: Option<f64>,
    pub projections: Vec<Projection>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub files: Vec<PathBuf>,
}

fn value_label(v: f64) -> String {
    format!("{v}")
}

fn sweep_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let has = |m: SweepMetric| spec.metrics.contains(&m);
    let mut header = vec!["parameter".to_string(), "value".into(), "status".into()];
    if has(SweepMetric::Hurwitz) {
        header.push("hurwitz".into());
    }
    if has(SweepMetric::SpectralAbscissa) {
        header.push("spectral_abscissa".into());
    }
    if has(SweepMetric::Rho) {
        header.push("rho".into());
    }
    if has(SweepMetric::Extents) {
        for plane in REPORT_PLANES {
            for axis in [plane.0, plane.1] {
                header.push(format!("{}_extent_{}", plane_name(plane), INTERNAL_NAMES[axis]));
            }
        }
    }
    header.push("error".into());
    let mut s = header.join(",");
    s.push('\n');
    let opt = |v: Option<f64>| v.map(sig9).unwrap_or_default();
    for r in rows {
        let mut cells = vec![spec.parameter.name().to_string(), sig9(r.value), r.status.clone()];
        if has(SweepMetric::Hurwitz) {
            cells.push(r.hurwitz.map(|h| h.to_string()).unwrap_or_default());
        }
        if has(SweepMetric::SpectralAbscissa) {
            cells.push(opt(r.abscissa));
        }
        if has(SweepMetric::Rho) {
            cells.push(opt(r.rho));
        }
        if has(SweepMetric::Extents) {
            for plane in REPORT_PLANES {
                let p = r.projections.iter().find(|p| p.plane == plane);
                cells.push(opt(p.map(|p| p.extents.0)));
                cells.push(opt(p.map(|p| p.extents.1)));
            }
        }
        cells.push(csv_field(r.error.as_deref().unwrap_or("")));
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Linearization and ROA per sweep value, in parallel. Per-value failures
/// are recorded in the row and the sweep continues.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<SweepReport> {
    let spec = cfg
        .sweep
        .clone()
        .ok_or_else(|| SailError::config("sweep", "the sweep command needs a `sweep` section"))?;
    if spec.values.len() < 2 {
        return Err(SailError::config("sweep.values", "a sweep needs at least two values"));
    }
    std::fs::create_dir_all(out)?;
    let name = spec.parameter.name();
    let rows: Vec<SweepRow> = spec
        .values
        .par_iter()
        .map(|&value| -> Result<SweepRow> {
            let mut one = cfg.with_parameter(spec.parameter, value)?;
            one.sweep = None;
            let dir = out.join(format!("{name}_{}", value_label(value)));
            let mut row = SweepRow {
                value,
                status: "ok".into(),
                hurwitz: None,
                abscissa: None,
                rho: None,
                projections: Vec::new(),
                error: None,
            };
            match analyze_roa(&one) {
                Ok(mut report) => {
                    write_roa(&mut report, &dir, &format!("{name} = {value}"))?;
                    row.hurwitz = Some(true);
                    row.abscissa = Some(report.hurwitz.abscissa);
                    row.rho = Some(report.estimate.rho);
                    if report.estimate.status == RoaStatus::PossiblyUnbounded {
                        row.status = "possibly-unbounded".into();
                    }
                    row.projections = report.projections;
                }
                Err(SailError::NotHurwitz { abscissa }) => {
                    row.status = "not-hurwitz".into();
                    row.hurwitz = Some(false);
                    row.abscissa = Some(abscissa);
                }
                Err(e) => {
                    row.status = match e {
                        SailError::Certification(_) => "certification-failed",
                        _ => "error",
                    }
                    .into();
                    row.error = Some(e.to_string());
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut files = Vec::new();
    write(out, "sweep.csv", &sweep_csv(&spec, &rows), &mut files)?;
    for plane in REPORT_PLANES {
        let curves: Vec<(String, Vec<[f64; 2]>)> = rows
            .iter()
            .filter_map(|r| {
                r.projections
                    .iter()
                    .find(|p| p.plane == plane)
                    .map(|p| (format!("{name} = {}", r.value), p.boundary.clone()))
            })
            .collect();
        if curves.is_empty() {
            continue;
        }
        let pn = plane_name(plane);
        let svg = svg::regions(
            &format!("ROA projection, {} plane", pn.replace('_', "-")),
            &axis_label(plane.0),
            &axis_label(plane.1),
            &curves,
        );
        write(out, &format!("sweep_{pn}.svg"), &svg, &mut files)?;
    }
    Ok(SweepReport { spec, rows, files })
}
