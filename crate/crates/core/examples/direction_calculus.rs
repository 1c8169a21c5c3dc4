//! Singular directions, their images under `x ↦ x^ν`, multisummability
//! levels and the arcs `V`, `U` around a direction.
//!
//! `cargo run --example direction_calculus`

use stokes_core::summation::{composed_singulars, direction_calculus, multisum_levels, roots_of_unity, Direction};

fn main() -> stokes_core::Result<()> {
    let q = 2;
    let s = roots_of_unity(q);
    println!("S = {s}");
    for nu in 1..=3 {
        println!("ν = {nu}: S_ν = {}", composed_singulars(&s, nu)?);
    }
    let lv = multisum_levels(q, &[1, 2, 3])?;
    println!("levels {:?}, S′ = {}", lv.levels, lv.s_prime);

    let theta = Direction::zero();
    let zeta = Direction::from_turn_fraction(1, 8);
    let rep = direction_calculus(theta, zeta, q as f64, &s);
    println!("d(θ, ζ) = {:.4}", rep.d);
    println!("V = ({}, +{:.4})", rep.v.start, rep.v.length);
    if let Some(u) = rep.u {
        println!("U = ({}, +{:.4})", u.start, u.length);
    }
    println!("θ+ = {}, θ− = {}", rep.theta_plus, rep.theta_minus);
    Ok(())
}
