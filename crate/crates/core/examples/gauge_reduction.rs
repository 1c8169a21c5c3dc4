//! Polynomial gauge taking a final form to interlaced final form, checked
//! by comparing the formal solutions of both systems.
//!
//! `cargo run --example gauge_reduction`

use stokes_core::gauge::{compute_gauge, gauge_identity_residual, pullback_system};
use stokes_core::odeforms::{example_final_form, formal_solution};

fn main() -> stokes_core::Result<()> {
    let ff = example_final_form();
    let g = compute_gauge(&ff)?;
    for (k, t) in g.t.coeffs().iter().enumerate() {
        println!("T_{k} = {:?}", t.to_f64());
    }
    for (k, (a, b)) in g.rotation_parts().iter().enumerate() {
        println!("N_{k} = {a}·I + {b}·J");
    }
    println!("gauge identity holds: {}", gauge_identity_residual(&ff, &g).is_zero());

    let spec = pullback_system(&ff, &g, 20)?;
    println!("interlaced system: a = {}, b = {}", spec.a, spec.b);
    let z = formal_solution(&spec, 20)?;
    let y = formal_solution(&ff, 20)?;
    println!("T·Z = Y to order 20: {}", g.t.apply_series(&z.h) == y.h);
    Ok(())
}
