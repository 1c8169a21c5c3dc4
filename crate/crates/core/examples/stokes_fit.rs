//! Stokes jump of the first worked example across the singular direction
//! `θ = 0`, and a fit of the exponential model to it.
//!
//! `cargo run --release --example stokes_fit`

use std::f64::consts::PI;

use stokes_core::odeforms::{example_interlaced, formal_solution};
use stokes_core::summation::{fit_stokes_model, log_moduli, predicted_parameters, stokes_difference, Direction, QuadratureConfig};

fn main() -> stokes_core::Result<()> {
    let spec = example_interlaced();
    let h = formal_solution(&spec, 120)?;
    let cfg = QuadratureConfig::default();
    let sample = stokes_difference(&h, Direction::zero(), 0.3, &log_moduli(0.08, 0.8, 12), &cfg)?;
    println!("lateral offset δ = {:.4}", sample.offset);
    for ((x, d), e) in sample.points.iter().zip(&sample.values).zip(&sample.errors) {
        println!("|x| = {:.3}: ΔH = ({:.3e}, {:.3e})  ± {:.1e}", x.norm(), d[0], d[1], e[0] + e[1]);
    }

    let m = fit_stokes_model(&sample, &spec)?;
    let p = predicted_parameters(&spec);
    println!("exp rate {:.6} (predicted {})", m.exp_rate, p.exp_rate());
    println!("oscillation {:.6} (predicted {})", m.osc_freq, p.osc_freq);
    println!("power {:.2e} (predicted {})", m.power_exponent, p.power_exponent);
    println!("|κ| = {:.5}, {:.5}; √(π sinh π) = {:.5}", m.fitted.constants[0].norm(), m.fitted.constants[1].norm(), (PI * PI.sinh()).sqrt());
    println!("max relative residual {:.1e} ({:?} samples per mode)", m.max_relative_residual, m.samples_used);
    Ok(())
}
