//! Sail shapes and their mass properties.
//!
//! Run with `cargo run --example geometry`.

use sailroa::geometry::{build_mesh, mass_properties, MassModel, SailShape};

fn main() -> sailroa::Result<()> {
    let shapes = [
        ("flat disc R=1", SailShape::flat_disc(1.0)),
        ("cone R=1, 40 deg", SailShape::cone(1.0, 40f64.to_radians())),
        ("cone R=1, 45 deg", SailShape::cone(1.0, 45f64.to_radians())),
        ("cap a=0.5, R=1", SailShape::spherical_cap(0.5, 1.0)),
    ];
    let mass = MassModel {
        sail_mass: 0.01,
        payload_mass: 0.01,
        mast_length: 2.0,
    };
    println!("{:<18} {:>10} {:>10} {:>10} {:>10} {:>10}", "shape", "area", "exact", "cm_z", "Ixx", "Izz");
    for (name, shape) in &shapes {
        let mesh = build_mesh(shape, 200, 200)?;
        let props = mass_properties(shape, &mass, 200, 200)?;
        let exact = shape.analytic_area().map(|a| format!("{a:.6}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<18} {:>10.6} {:>10} {:>10.5} {:>10.5} {:>10.5}",
            name,
            mesh.total_area(),
            exact,
            props.cm_offset,
            props.inertia[(0, 0)],
            props.inertia[(2, 2)]
        );
    }
    // the profile height z = g(x) along the radius of the 40 degree cone
    let cone = &shapes[1].1;
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("g({x:.2}) = {:+.5}", cone.sweep_height(x)?);
    }
    Ok(())
}
