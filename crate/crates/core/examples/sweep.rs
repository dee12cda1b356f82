//! Cone-angle sweep: stability and ROA extents at 40 and 45 degrees, with
//! CSV and overlay SVG output.
//!
//! Run with `cargo run --release --example sweep [out_dir]`.

use sailroa::cli::cmd_sweep;
use sailroa::config::{RunConfig, SweepMetric, SweepParameter, SweepSpec};

fn main() -> sailroa::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/sweep_example".into());
    let mut cfg = RunConfig::reference_cone();
    cfg.sweep = Some(SweepSpec {
        parameter: SweepParameter::ConeAngle,
        values: vec![35.0, 40.0, 45.0],
        metrics: SweepMetric::ALL.to_vec(),
    });
    cfg.validate()?;
    let report = cmd_sweep(&cfg, std::path::Path::new(&out))?;
    for row in &report.rows {
        let tp = row.projections.iter().find(|p| p.plane == (2, 3));
        println!(
            "alpha = {:>4} deg  {:<12} abscissa {:>+10.4e}  rho {:>11}  theta extent {}",
            row.value,
            row.status,
            row.abscissa.unwrap_or(f64::NAN),
            row.rho.map(|r| format!("{r:.4e}")).unwrap_or_else(|| "-".into()),
            tp.map(|p| format!("{:.4} rad", p.extents.0)).unwrap_or_else(|| "-".into())
        );
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
