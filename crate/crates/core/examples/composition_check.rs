//! Checks the Stokes identity for a relation among composed solutions:
//! `F(upper) − F(lower)` against `Σ D̃_ij (ΔH_i ∘ P_j)`.
//!
//! `cargo run --release --example composition_check`

use stokes_core::matrix::Poly;
use stokes_core::odeforms::example_interlaced;
use stokes_core::satcheck::{stokes_composition_check, CompositionOptions, QShortPoly};
use stokes_core::series::{int, MultiSeries};
use stokes_core::summation::{log_moduli, ray_points, Direction};

fn main() -> stokes_core::Result<()> {
    let spec = example_interlaced();
    let ps = [QShortPoly::new(Poly::from_ints(&[0, 1]), 1)?];
    let f = MultiSeries::with_vars(&["Z11", "Z21"], [(vec![1, 0], int(1)), (vec![0, 1], int(1)), (vec![2, 0], int(1))], None);
    let xs = ray_points(0.3, &log_moduli(0.06, 0.14, 5));
    let r = stokes_composition_check(&f, &spec, &ps, Direction::zero(), &xs, &CompositionOptions::default())?;
    for s in &r.samples {
        println!("|x| = {:.3}: lhs {:.6e}  rhs {:.6e}  relative error {:.1e}", s.x.norm(), s.lhs, s.rhs, s.relative_error);
    }
    println!("max relative error {:.1e}", r.max_relative_error);
    Ok(())
}
