//! Linearized attitude/transverse dynamics of the 40 degree cone, the
//! Hurwitz test, and the quadratic Lyapunov function for Q = I.
//!
//! Run with `cargo run --release --example linearize`.

use nalgebra::DMatrix;
use sailroa::config::RunConfig;
use sailroa::stability::{eigenvalues, is_hurwitz, linearize_internal, solve_lyapunov, INTERNAL_NAMES};

fn main() -> sailroa::Result<()> {
    let cfg = RunConfig::reference_cone();
    let model = linearize_internal(&cfg.dynamics_params()?, &cfg.internal_options())?;
    println!("hover power {:.4e} W", model.hover_power);
    for (k, a) in model.coefficients().iter().enumerate() {
        println!("A{} = {a:+.5}", k + 1);
    }
    println!("state order: {}", INTERNAL_NAMES.join(", "));
    println!("A =\n{:.4}", model.a);

    for l in eigenvalues(&model.a)? {
        println!("lambda = {:+.4} {:+.4}i", l.re, l.im);
    }
    let verdict = is_hurwitz(&model.a)?;
    println!("Hurwitz: {} (abscissa {:+.4e})", verdict.hurwitz, verdict.abscissa);
    if verdict.hurwitz {
        let lyap = solve_lyapunov(&model.a, &DMatrix::identity(8, 8))?;
        let min_eig = lyap.p.symmetric_eigenvalues().min();
        println!("P: residual {:.2e}, smallest eigenvalue {min_eig:.4e}", lyap.residual);
    }
    Ok(())
}
