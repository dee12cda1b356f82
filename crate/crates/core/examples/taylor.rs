//! Cubic polynomial model of the 40 degree cone's internal dynamics, fit
//! from ray-traced samples around the hover point.
//!
//! Run with `cargo run --release --example taylor`.

use sailroa::config::RunConfig;
use sailroa::stability::{taylor_expand_internal, INTERNAL_NAMES};

fn main() -> sailroa::Result<()> {
    let cfg = RunConfig::reference_cone();
    let t = taylor_expand_internal(&cfg.dynamics_params()?, &cfg.taylor_options())?;
    println!("condition number of the fit: {:.3}", t.condition);
    println!("linear block mismatch vs finite differences: {:.3e}", t.linear_mismatch);
    for (i, comp) in t.field.components.iter().enumerate() {
        println!(
            "d{}/dt  (fit residual {:.2e}, {} terms)\n    {}",
            INTERNAL_NAMES[i],
            t.fit_residuals[i],
            comp.len(),
            comp.prune(0.05)
        );
    }
    Ok(())
}
