//! Sparse multivariate polynomials: arithmetic, derivatives, and the
//! Lyapunov derivative along a vector field.
//!
//! Run with `cargo run --example polynomial`.

use nalgebra::DMatrix;
use sailroa::poly::{monomial_count, monomials, PolyVectorField, Polynomial};
use sailroa::roa::vdot_polynomial;

fn main() -> sailroa::Result<()> {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    // reversed Van der Pol: x' = -y, y' = x + (x^2 - 1) y
    let f = PolyVectorField::new(vec![
        y.scale(-1.0),
        x.add(&x.mul(&x).sub(&Polynomial::constant(2, 1.0)).mul(&y)),
    ]);
    for (i, c) in f.components.iter().enumerate() {
        println!("f{i} = {c}");
    }
    println!("d f1 / dx = {}", f.components[1].derivative(0));
    println!("linear part =\n{}", f.linear_part());

    let p = DMatrix::from_row_slice(2, 2, &[1.5, -0.5, -0.5, 1.0]);
    let vdot = vdot_polynomial(&p, &f)?;
    println!("Vdot = {vdot}");
    println!("Vdot(0.5, 0.5) = {:.6}", vdot.eval(&[0.5, 0.5]));

    println!(
        "monomials in 8 variables of degree <= 3: {} (= C(11, 3) = {})",
        monomials(8, 0, 3).len(),
        monomial_count(8, 3)
    );
    Ok(())
}
