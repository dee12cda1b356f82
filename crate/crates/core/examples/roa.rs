//! Region-of-attraction estimate for the 40 degree cone and its shadows on
//! the four reporting planes.
//!
//! Run with `cargo run --release --example roa`.

use sailroa::cli::analyze_roa;
use sailroa::config::RunConfig;
use sailroa::stability::INTERNAL_NAMES;

fn main() -> sailroa::Result<()> {
    let cfg = RunConfig::reference_cone();
    let r = analyze_roa(&cfg)?;
    let e = &r.estimate;
    println!("rho = {:.5e} ({:?}, {} samples)", e.rho, e.status, e.n_samples);
    println!("spectral abscissa {:+.4e}", r.hurwitz.abscissa);
    for p in &r.projections {
        let (i, j) = p.plane;
        println!(
            "{:>5}-{:<5}  |{}| <= {:.4}   |{}| <= {:.4}",
            INTERNAL_NAMES[i], INTERNAL_NAMES[j], INTERNAL_NAMES[i], p.extents.0, INTERNAL_NAMES[j], p.extents.1
        );
    }
    let d: Vec<String> = e.worst_direction.iter().map(|v| format!("{v:+.3}")).collect();
    println!("closest refuting direction: [{}]", d.join(", "));
    Ok(())
}
