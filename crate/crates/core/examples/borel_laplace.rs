//! Borel-Laplace summation of the Euler series `Σ (−1)^n n! x^{n+1}`,
//! compared with `e^{1/x} E_1(1/x)`, and the Gevrey asymptotic check.
//!
//! `cargo run --example borel_laplace`

use num_complex::Complex64;
use stokes_core::series::TruncatedSeries;
use stokes_core::summation::{asymptotic_check, borel_transform, laplace_sum, log_moduli, Direction, QuadratureConfig};

fn main() -> stokes_core::Result<()> {
    let order = 60;
    let mut fact = 1.0;
    let coeffs: Vec<Complex64> = (0..=order)
        .map(|n| {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            let c = if n == 0 { 0.0 } else if n % 2 == 1 { fact } else { -fact };
            Complex64::new(c, 0.0)
        })
        .collect();
    let f = TruncatedSeries::new(coeffs);
    let b = borel_transform(&f, 1)?;
    println!("Borel transform: {:?}", &b.coeffs()[..6]);

    let cfg = QuadratureConfig::default();
    let xs: Vec<Complex64> = log_moduli(0.02, 0.5, 8).into_iter().map(|r| Complex64::new(r, 0.0)).collect();
    let sums = laplace_sum(&b, 1, Direction::zero(), &xs, &cfg)?;
    for v in &sums {
        let exact = e1_scaled(1.0 / v.x.re);
        println!("x = {:.4}: sum {:.12} exact {:.12} (error estimate {:.1e})", v.x.re, v.value.re, exact, v.error);
    }
    let report = asymptotic_check(&sums, &f.truncate(12), 1);
    println!("Gevrey-1 asymptotics: passed = {}, constant = {:.3}, orders checked = {}", report.passed, report.constant, report.orders_checked);
    Ok(())
}

/// `e^z E_1(z)` from its continued fraction.
fn e1_scaled(z: f64) -> f64 {
    let mut tail = 0.0;
    for n in (1..400).rev() {
        let nf = n as f64;
        tail = nf * nf / (z + 2.0 * nf + 1.0 - tail);
    }
    1.0 / (z + 1.0 - tail)
}
