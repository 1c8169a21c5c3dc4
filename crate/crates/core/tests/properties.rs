mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use stokes_core::cli::{parse_spec_value, spec_value};
use stokes_core::odeforms::{formal_solution, ode_residual, SystemSpec};
use stokes_core::satcheck::composed_principal;
use stokes_core::series::{binom_decompose, rat, MultiSeries, Rational, TruncatedSeries};

const ORDER: usize = 8;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn series() -> impl Strategy<Value = TruncatedSeries<Rational>> {
    prop::collection::vec(rational(), ORDER + 1).prop_map(TruncatedSeries::new)
}

/// Series without constant term, suitable as the inner argument of a composition.
fn inner_series() -> impl Strategy<Value = TruncatedSeries<Rational>> {
    series().prop_map(|mut s| {
        s.set_coeff(0, rat(0, 1));
        s
    })
}

fn field_poly() -> impl Strategy<Value = MultiSeries<Rational>> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), rational()), 1..6).prop_map(|terms| {
        MultiSeries::with_vars(&["X", "Y1", "Y2"], terms.into_iter().map(|((a, b, c), k)| (vec![a, b, c], k)), None)
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn inverse_is_two_sided(mut a in series(), c0 in 1i64..5) {
        a.set_coeff(0, rat(c0, 1));
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, TruncatedSeries::one(ORDER));
    }

    #[test]
    fn composition_is_associative(f in series(), g in inner_series(), h in inner_series()) {
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn binomial_decomposition_reconstructs_difference(
        f in field_poly(),
        x in point(), y1 in point(), y2 in point(), z1 in point(), z2 in point(),
    ) {
        let d = binom_decompose(&f, &[1, 2]);
        let full = [x, y1, y2, z1, z2];
        let lhs = f.eval_complex(&[x, y1, y2]) - f.eval_complex(&[x, z1, z2]);
        let rhs = d.factors[0].eval_complex(&full) * (y1 - z1) + d.factors[1].eval_complex(&full) * (y2 - z2);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn distinct_qshort_pairs_separate(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let q = 1 + (seed % 4) as u32;
        let mut a = common::poly(&mut rng, q as usize).coeffs().to_vec();
        a.resize(q as usize + 1, rat(0, 1));
        a[0] = common::positive_rational(&mut rng);
        let a = stokes_core::matrix::Poly::new(a);
        let p1 = common::qshort(&mut rng, q, 8);
        let p2 = common::distinct_qshort(&mut rng, &p1, 8);
        let d = composed_principal(&a, q, &p1).unwrap().sub(&composed_principal(&a, q, &p2).unwrap());
        prop_assert!(d.has_principal_part(), "{} vs {}", p1, p2);
    }

    #[test]
    fn spec_json_round_trip(seed in any::<u64>(), interlaced in any::<bool>()) {
        let mut rng = common::rng(seed);
        let spec: SystemSpec = if interlaced { common::interlaced(&mut rng).into() } else { common::final_form(&mut rng).into() };
        let back = parse_spec_value(&spec_value(&spec)).unwrap();
        prop_assert_eq!(back, spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_interlaced_solutions_have_zero_residual(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let spec = common::interlaced(&mut rng);
        let h = formal_solution(&spec, 15).unwrap();
        let res = ode_residual(&spec, &h.h, 15).unwrap();
        prop_assert!(res.iter().all(TruncatedSeries::is_zero));
    }
}
