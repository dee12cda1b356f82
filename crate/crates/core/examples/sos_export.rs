//! S-procedure program for x' = -x + x^3 with V = x^2, a hand-built
//! certificate at rho = 1, and export in SDPA sparse format.
//!
//! Run with `cargo run --example sos_export [file]`.

use nalgebra::DMatrix;
use sailroa::poly::{Polynomial, PolyVectorField};
use sailroa::roa::{assemble_sos, export_sdpa, parse_sdpa, vdot_polynomial};

fn main() -> sailroa::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "cubic.dat-s".into());
    let x = Polynomial::var(1, 0);
    let f = PolyVectorField::new(vec![x.scale(-1.0).add(&x.mul(&x).mul(&x))]);
    let p = DMatrix::from_element(1, 1, 1.0);
    println!("Vdot = {}", vdot_polynomial(&p, &f)?);

    let program = assemble_sos(&p, &f, 2)?;
    println!(
        "{} equations, Gram basis {}, multiplier basis {}",
        program.equations.len(),
        program.gram_basis.len(),
        program.multiplier_basis.len()
    );
    // s = (x^2 - 2)/2 and a rank-one Gram matrix on (x, x^2, x^3)
    let s = [-1.0, 0.0, 0.5];
    let gram = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0]);
    for rho in [0.9, 1.0, 1.1] {
        println!("identity residual at rho = {rho}: {:.3e}", program.residual(rho, &s, &gram));
    }

    let problem = program.to_sdpa()?;
    export_sdpa(&problem, std::path::Path::new(&path))?;
    let back = parse_sdpa(&std::fs::read_to_string(&path)?)?;
    println!("wrote {path}: m = {}, blocks {:?}, {} entries", back.m, back.block_sizes, back.entries.len());
    Ok(())
}
