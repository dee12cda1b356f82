//! Closed-loop levitation of the 40 degree cone from a 10 degree roll and
//! pitch offset, on a coarse ray grid so it finishes in seconds.
//!
//! Run with `cargo run --release --example simulate [t_end]`.

use sailroa::config::RunConfig;
use sailroa::dynamics::simulate;

fn main() -> sailroa::Result<()> {
    let t_end: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let mut cfg = RunConfig::reference_cone();
    cfg.rays = 50;
    cfg.initial.roll_deg = 10.0;
    cfg.initial.pitch_deg = 10.0;
    cfg.integrator.dt = 1e-2;
    cfg.integrator.t_end = t_end;
    cfg.validate()?;

    let traj = simulate(&cfg.initial_state(), &cfg.dynamics_params()?, &cfg.simulation_options())?;
    let every = (traj.rows.len() / 10).max(1);
    println!("{:>7} {:>9} {:>9} {:>9} {:>11}", "t", "z", "theta", "phi", "u [W]");
    for r in traj.rows.iter().step_by(every) {
        println!(
            "{:>7.2} {:>9.5} {:>+9.5} {:>+9.5} {:>11.4e}",
            r.t, r.state.z, r.state.theta, r.state.phi, r.control.power
        );
    }
    let m = &traj.metrics;
    println!("final tilt norm {:.3e} rad, height error {:.3e} m", m.final_tilt_norm, m.final_height_error);
    Ok(())
}
