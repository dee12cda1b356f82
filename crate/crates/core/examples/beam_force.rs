//! Ray-cast radiation force on a flat disc against the closed-form Gaussian
//! interception, then the restoring torque of a tilted cone.
//!
//! Run with `cargo run --release --example beam_force`.

use sailroa::dynamics::VehicleState;
use sailroa::geometry::{mass_properties, MassModel, SailShape};
use sailroa::radiation::{force_torque, BeamProfile, SPEED_OF_LIGHT};

fn main() -> sailroa::Result<()> {
    let mass = MassModel {
        sail_mass: 0.01,
        payload_mass: 0.01,
        mast_length: 2.0,
    };
    let beam = BeamProfile::with_fwhm(1e9, 1.0);

    let disc = SailShape::flat_disc(1.0);
    let props = mass_properties(&disc, &mass, 100, 100)?;
    let upright = VehicleState::at_height(10.0);
    // a disc of radius FWHM intercepts 1 - exp(-4 ln 2) = 15/16 of the power
    let exact = 15.0 / 16.0 * 2.0 * beam.power / SPEED_OF_LIGHT;
    for n in [25, 50, 100, 200] {
        let ft = force_torque(&upright, &disc, &props, &beam, n)?;
        println!(
            "disc, {n:>3}x{n:<3} rays: F_z = {:.6} N  (exact {:.6}, rel err {:+.2e})",
            ft.force.z,
            exact,
            ft.force.z / exact - 1.0
        );
    }

    let cone = SailShape::cone(1.0, 40f64.to_radians());
    let props = mass_properties(&cone, &mass, 200, 200)?;
    println!("\ncone 40 deg, pitched (theta) and displaced (x):");
    for (theta, x) in [(0.0, 0.0), (0.05, 0.0), (0.0, 0.05), (0.05, 0.05)] {
        let state = VehicleState { theta, x, ..upright };
        let ft = force_torque(&state, &cone, &props, &beam, 100)?;
        println!(
            "theta={theta:.2} x={x:.2}  F=({:+.4e}, {:+.4e}, {:.4e}) N  tau_y={:+.4e} N m",
            ft.force.x, ft.force.y, ft.force.z, ft.torque.y
        );
    }
    Ok(())
}
