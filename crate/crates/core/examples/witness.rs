//! Searches for a nonvanishing witness of `F ∘ {H_i ∘ P_j}`, i.e. the
//! first order at which a candidate relation among composed solutions
//! fails.
//!
//! `cargo run --example witness`

use stokes_core::matrix::Poly;
use stokes_core::odeforms::example_interlaced;
use stokes_core::satcheck::{witness_search, witness_variables, QShortPoly};
use stokes_core::series::{int, MultiSeries};

fn main() -> stokes_core::Result<()> {
    let spec = example_interlaced();
    let ps = [QShortPoly::new(Poly::from_ints(&[0, 1]), 1)?, QShortPoly::new(Poly::from_ints(&[0, 2]), 1)?];
    let vars = witness_variables(ps.len());
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    println!("variables {names:?}");

    // F = Z11·Z12 − Z21² + X
    let mut f = MultiSeries::with_vars(&names, [], None);
    let idx = |v: &str| names.iter().position(|n| *n == v).unwrap();
    let mut e = vec![0; names.len()];
    e[idx("Z11")] = 1;
    e[idx("Z12")] = 1;
    f.add_term(e, int(1));
    let mut e = vec![0; names.len()];
    e[idx("Z21")] = 2;
    f.add_term(e, int(-1));
    let mut e = vec![0; names.len()];
    e[idx("X")] = 1;
    f.add_term(e, int(1));

    let w = witness_search(&f, &spec, &ps, 30)?;
    println!("certified to order {}", w.certified_order);
    println!("first nonzero order {:?}, leading coefficient {:?}", w.first_nonzero_order, w.leading_coefficient.map(|c| c.to_string()));
    println!("variables of F: {:?}", w.lambda);
    Ok(())
}
