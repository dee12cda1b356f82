//! `sailroa` command line: `simulate`, `linearize`, `roa` and `sweep`, each
//! driven by a JSON run configuration.

mod commands;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{
    analyze_roa, cmd_linearize, cmd_roa, cmd_simulate, cmd_sweep, LinearizeReport, RoaReport, SimulateReport,
    SweepReport, SweepRow,
};

use crate::config::RunConfig;
use crate::error::SailError;
use crate::stability::INTERNAL_NAMES;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEXPECTED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SIMULATION: i32 = 3;
pub const EXIT_NOT_HURWITZ: i32 = 4;
pub const EXIT_CERTIFICATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "sailroa", version, about = "Beam-riding sail dynamics and region-of-attraction analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the closed-loop equations of motion.
    Simulate(RunArgs),
    /// Linearize the attitude/transverse dynamics and test stability.
    Linearize(RunArgs),
    /// Estimate the region of attraction around the hover point.
    Roa(RunArgs),
    /// Repeat the ROA analysis over a parameter sweep.
    Sweep(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `output_dir` in the configuration).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the SOS program in SDPA sparse format (roa only).
    #[arg(long, value_name = "FILE")]
    pub export_sdpa: Option<PathBuf>,
    /// Print the fully resolved configuration and exit.
    #[arg(long)]
    pub print_config: bool,
}

pub fn exit_code(err: &SailError) -> i32 {
    match err {
        SailError::Config { .. } | SailError::Json(_) | SailError::InvalidParameter { .. } => EXIT_CONFIG,
        SailError::Simulation { .. }
        | SailError::Integration { .. }
        | SailError::GimbalLock { .. }
        | SailError::ActuationLost { .. } => {
            EXIT_SIMULATION
        }
        SailError::NotHurwitz { .. } => EXIT_NOT_HURWITZ,
        SailError::Certification(_) => EXIT_CERTIFICATION,
        _ => EXIT_UNEXPECTED,
    }
}

fn fail(err: &SailError) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

/// Parse the process arguments, configure the thread pool from
/// `SAILROA_THREADS`, run, and return the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("SAILROA_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // fails only if a pool already exists, which is harmless
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => return fail(&SailError::config("SAILROA_THREADS", format!("expected a positive integer, got `{v}`"))),
        }
    }
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let (name, args) = match &cli.command {
        Command::Simulate(a) => ("simulate", a),
        Command::Linearize(a) => ("linearize", a),
        Command::Roa(a) => ("roa", a),
        Command::Sweep(a) => ("sweep", a),
    };
    let cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(SailError::Io(e)) => {
            return fail(&SailError::config("--config", format!("{}: {e}", args.config.display())));
        }
        Err(e) => return fail(&e),
    };
    if args.print_config {
        println!("{}", cfg.to_json());
        return EXIT_OK;
    }
    if args.export_sdpa.is_some() && name != "roa" {
        return fail(&SailError::config("--export-sdpa", "only valid with the roa command"));
    }
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    match &cli.command {
        Command::Simulate(_) => simulate_main(&cfg, &out),
        Command::Linearize(_) => linearize_main(&cfg, &out),
        Command::Roa(a) => roa_main(&cfg, &out, a.export_sdpa.as_deref()),
        Command::Sweep(_) => sweep_main(&cfg, &out),
    }
}

fn simulate_main(cfg: &RunConfig, out: &Path) -> i32 {
    match cmd_simulate(cfg, out) {
        Ok(r) => {
            let m = &r.trajectory.metrics;
            println!("steps            {}", r.trajectory.rows.len() - 1);
            match m.settling_time {
                Some(t) => println!("settling time    {t:.3} s"),
                None => println!("settling time    not reached"),
            }
            println!("height error     {:.3e} m", m.final_height_error);
            println!("tilt norm        {:.3e} rad", m.final_tilt_norm);
            println!("rate norm        {:.3e} rad/s", m.final_rate_norm);
            println!("saturated steps  {}", m.saturated_steps);
            println!("output           {}", out.display());
            EXIT_OK
        }
        Err(e) => {
            if matches!(e, SailError::Simulation { .. }) {
                eprintln!("partial trajectory written to {}", out.display());
            }
            fail(&e)
        }
    }
}

fn linearize_main(cfg: &RunConfig, out: &Path) -> i32 {
    match cmd_linearize(cfg, out) {
        Ok(r) => {
            for (k, v) in r.model.coefficients().iter().enumerate() {
                println!("A{}  {v:+.6e}", k + 1);
            }
            println!("eigenvalues:");
            for l in &r.eigenvalues {
                println!("  {:+.6e} {:+.6e}i", l.re, l.im);
            }
            println!("spectral abscissa {:+.6e}", r.hurwitz.abscissa);
            if r.hurwitz.hurwitz {
                println!("Hurwitz: yes");
                EXIT_OK
            } else {
                println!("Hurwitz: no");
                EXIT_NOT_HURWITZ
            }
        }
        Err(e) => fail(&e),
    }
}

fn roa_main(cfg: &RunConfig, out: &Path, export: Option<&Path>) -> i32 {
    match cmd_roa(cfg, out, export) {
        Ok(r) => {
            println!("rho              {:.6e}", r.estimate.rho);
            println!("status           {:?}", r.estimate.status);
            println!("spectral abscissa {:+.6e}", r.hurwitz.abscissa);
            for p in &r.projections {
                println!(
                    "extent {:>5}-{:<5} {:.4e}  {:.4e}",
                    INTERNAL_NAMES[p.plane.0], INTERNAL_NAMES[p.plane.1], p.extents.0, p.extents.1
                );
            }
            if let Some(path) = export {
                println!("sdpa             {}", path.display());
            }
            println!("output           {}", out.display());
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn sweep_main(cfg: &RunConfig, out: &Path) -> i32 {
    match cmd_sweep(cfg, out) {
        Ok(r) => {
            for row in &r.rows {
                let rho = row.rho.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into());
                println!("{} = {:<10} {:<20} rho {rho}", r.spec.parameter.name(), row.value, row.status);
            }
            println!("output           {}", out.display());
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}
