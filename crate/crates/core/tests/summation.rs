use std::f64::consts::PI;

use num_complex::Complex64;

use stokes_core::matrix::Poly;
use stokes_core::odeforms::{example_interlaced, formal_solution};
use stokes_core::satcheck::{stokes_composition_check, CompositionOptions, QShortPoly};
use stokes_core::series::{int, MultiSeries};
use stokes_core::summation::{
    asymptotic_check, borel_transform_exact, fit_stokes_model, laplace_sum, log_moduli, ray_points, stokes_difference, Direction,
    QuadratureConfig,
};

/// `Γ(1 + i)`.
const GAMMA_1_PLUS_I: Complex64 = Complex64::new(0.498015668118356, -0.154949828301811);

#[test]
fn first_example_stokes_jump_matches_closed_form() {
    // |Γ(1 + i)|² = π / sinh(π)
    assert!((GAMMA_1_PLUS_I.norm_sqr() - PI / PI.sinh()).abs() < 1e-14);

    let spec = example_interlaced();
    let cfg = QuadratureConfig::default();
    let h = formal_solution(&spec, 120).unwrap();
    let sample = stokes_difference(&h, Direction::zero(), 0.3, &log_moduli(0.08, 0.8, 12), &cfg).unwrap();
    // ΔH_1 + iΔH_2 = −2i sinh(π) Γ(1 + i) e^{−1/x} x^i
    for ((x, d), e) in sample.points.iter().zip(&sample.values).zip(&sample.errors) {
        let exact = Complex64::new(0.0, -2.0 * PI.sinh()) * GAMMA_1_PLUS_I * (-1.0 / x).exp() * x.powc(Complex64::i());
        let gap = (d[0] + Complex64::i() * d[1] - exact).norm();
        assert!(gap <= e[0] + e[1], "x = {x}: gap {gap:e} exceeds reported error {:e}", e[0] + e[1]);
        if x.norm() <= 0.3 {
            assert!(gap < 1e-4 * exact.norm(), "x = {x}: relative gap {:e}", gap / exact.norm());
        }
    }

    let m = fit_stokes_model(&sample, &spec).unwrap();
    let expected = (PI * PI.sinh()).sqrt();
    for c in m.fitted.constants {
        assert!((c.norm() - expected).abs() < 1e-3 * expected, "|κ| = {}, expected {expected}", c.norm());
    }
    assert!(m.power_exponent.abs() < 1e-3);
}

#[test]
fn first_example_sum_has_gevrey_asymptotics() {
    let spec = example_interlaced();
    let cfg = QuadratureConfig::default();
    let h = formal_solution(&spec, 120).unwrap();
    let theta = Direction::new(0.5);
    let xs = ray_points(0.5, &log_moduli(0.01, 0.3, 16));
    let borel = borel_transform_exact(&h.h[0], 1).unwrap();
    let values = laplace_sum(&borel, 1, theta, &xs, &cfg).unwrap();
    let report = asymptotic_check(&values, &h.h[0].to_complex().truncate(16), 1);
    assert!(report.passed, "{report:?}");
    assert!(report.orders_checked >= 10);
}

#[test]
fn squared_relation_obeys_composed_stokes_identity() {
    let spec = example_interlaced();
    let f = MultiSeries::with_vars(&["Z11"], [(vec![2], int(1))], None);
    let opts = CompositionOptions::default();
    // The four-term factor D̃ is an asymptotic expansion, so the check is
    // only meaningful where its truncation error is small; for ν = 2 the
    // jump e^{−1/P(x)} also has to stay above the roundoff of F(U) − F(L).
    let cases = [(vec![0, 1], 0.06, 0.14), (vec![0, 0, 1, 1], 0.2, 0.26)];
    for (p, lo, hi) in cases {
        let ps = [QShortPoly::new(Poly::from_ints(&p), 1).unwrap()];
        let xs = ray_points(0.3, &log_moduli(lo, hi, 5));
        let r = stokes_composition_check(&f, &spec, &ps, Direction::zero(), &xs, &opts).unwrap();
        assert!(r.max_relative_error < 0.05, "P = {}: {}", ps[0], r.max_relative_error);
    }
}
