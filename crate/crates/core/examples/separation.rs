//! Exponential separation of composed solutions: principal parts of
//! `Q_a ∘ P_j − Q_a ∘ P_k` for a family of `q`-short polynomials, and the
//! dominant index along a ray.
//!
//! `cargo run --example separation`

use stokes_core::matrix::Poly;
use stokes_core::satcheck::{exponential_separation, singular_indices, QShortPoly};
use stokes_core::summation::Direction;

fn main() -> stokes_core::Result<()> {
    let q = 2;
    let a = Poly::from_ints(&[1, 0, 1]);
    let ps = [
        QShortPoly::new(Poly::from_ints(&[0, 1]), q)?,
        QShortPoly::new(Poly::from_ints(&[0, 1, 1]), q)?,
        QShortPoly::new(Poly::from_ints(&[0, 2]), q)?,
    ];
    let theta = Direction::zero();
    let omega = singular_indices(&ps, q, theta);
    let rep = exponential_separation(&a, q, &ps, &omega, 0.2, theta)?;
    for pair in &rep.pairwise {
        let terms: Vec<String> = pair.part.principal().iter().map(|(e, c)| format!("{c}·X^{e}")).collect();
        println!("Q∘P{} − Q∘P{}: {}", pair.j1, pair.j2, terms.join(" + "));
    }
    println!("violations {:?}", rep.violations);
    println!("dominance along φ = {}: {:?}, j0 = {:?}", rep.phi, rep.dominance, rep.j0);
    Ok(())
}
