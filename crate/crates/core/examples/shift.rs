//! One step of `H ↦ (H − h_1 x) / x` carried out on the system itself.
//!
//! `cargo run --example shift`

use stokes_core::odeforms::{example_interlaced, formal_solution, rk_shift};

fn main() -> stokes_core::Result<()> {
    let spec = example_interlaced();
    let s = rk_shift(&spec, 12)?;
    println!("h_1 = ({}, {})", s.p[0], s.p[1]);
    println!("new a = {}", s.new_spec.a);
    println!("new forcing d = ({}, {})", s.new_spec.c[0], s.new_spec.c[1]);

    let h = formal_solution(&spec, 13)?;
    let k = formal_solution(&s.new_spec, 12)?;
    for n in 1..=5 {
        let (a, b) = (k.coeff(n), h.coeff(n + 1));
        println!("x^{n}: shifted ({}, {})  original x^{} ({}, {})", a[0], a[1], n + 1, b[0], b[1]);
    }
    Ok(())
}
