//! Shadow of an ellipsoid on a coordinate plane, and the lift of a boundary
//! point back onto the level set.
//!
//! Run with `cargo run --example projection`.

use nalgebra::DMatrix;
use sailroa::roa::project_ellipsoid;

fn main() -> sailroa::Result<()> {
    #[rustfmt::skip]
    let p = DMatrix::from_row_slice(3, 3, &[
        4.0, 1.0, 0.5,
        1.0, 3.0, 0.2,
        0.5, 0.2, 2.0,
    ]);
    let rho = 1.0;
    for plane in [(0, 1), (0, 2), (1, 2)] {
        let proj = project_ellipsoid(&p, rho, plane, 8)?;
        println!(
            "plane {plane:?}: extents ({:.4}, {:.4}), semi-axes ({:.4}, {:.4})",
            proj.extents.0, proj.extents.1, proj.semi_axes.0, proj.semi_axes.1
        );
        let z = proj.boundary[1];
        let x = proj.lift(&p, z)?;
        let v = (x.transpose() * &p * &x)[(0, 0)];
        println!("  boundary point {z:.4?} lifts to V = {v:.12}");
    }
    Ok(())
}
