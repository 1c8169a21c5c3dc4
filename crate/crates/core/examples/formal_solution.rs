//! Formal power-series solution of `x² y' = (I + xJ) y + (x, 0)` and its
//! Gevrey growth.
//!
//! `cargo run --example formal_solution`

use stokes_core::odeforms::{example_interlaced, formal_solution, gevrey_estimate, ode_residual};
use stokes_core::series::TruncatedSeries;

fn main() -> stokes_core::Result<()> {
    let spec = example_interlaced();
    let h = formal_solution(&spec, 40)?;
    for n in 1..=8 {
        let [a, b] = h.coeff(n);
        println!("h_{n} = ({a}, {b})");
    }
    let residual = ode_residual(&spec, &h.h, 40)?;
    println!("residual vanishes through x^40: {}", residual.iter().all(TruncatedSeries::is_zero));

    let g = gevrey_estimate(&h)?;
    println!("Gevrey order ≈ {:.3} (constant {:.3}, {} points)", g.s_estimate, g.constant_estimate, g.points_used);
    Ok(())
}
