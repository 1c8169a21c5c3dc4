//! The Stokes jump of the Euler series `Σ n! x^{n+1}` is the residue
//! contribution `2πi e^{−1/x} / x` of the Borel pole at `t = 1`.
//!
//! `cargo run --example stokes_residue`

use std::f64::consts::PI;

use num_complex::Complex64;
use stokes_core::series::TruncatedSeries;
use stokes_core::summation::{lateral_offset, lateral_pairs, BorelContinuation, Direction, QuadratureConfig, SingularSet};

fn main() -> stokes_core::Result<()> {
    let cfg = QuadratureConfig::default();
    let borel = TruncatedSeries::new(vec![Complex64::new(1.0, 0.0); 60]);
    let cont = BorelContinuation::new(&borel, 1, &cfg)?;
    println!("Padé poles: {:?}", cont.approximant().poles());

    let theta = Direction::zero();
    let delta = lateral_offset(theta, 0.0, 1, &SingularSet::new([theta]))?;
    let xs: Vec<Complex64> = [0.05, 0.1, 0.15, 0.2].iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for p in lateral_pairs(&cont, theta, delta, &xs, &cfg)? {
        let exact = 2.0 * PI * Complex64::i() * (-1.0 / p.x).exp() / p.x;
        let d = p.difference();
        println!("x = {:.2}: Δ = {:.6e}  2πi e^(−1/x)/x = {:.6e}", p.x.re, d.value, exact);
    }
    Ok(())
}
