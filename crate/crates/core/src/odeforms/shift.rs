//! One step of `H ↦ (H − p) / X` at the level of the system.

use num_traits::Zero;

use super::{formal_solution, validate_system, FormalSolution, InterlacedSpec, VectorField};
use crate::error::{Error, Result};
use crate::matrix::{Mat2, Poly, PolyMat2};
use crate::series::{binomial, MultiSeries, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftResult {
    /// First-order coefficient `h_1` of the original solution.
    pub p: [Rational; 2],
    /// System solved by `(H − p X) / X`, with `d(x)` as its forcing term.
    pub new_spec: InterlacedSpec,
    pub new_solution_prefix: FormalSolution,
}

/// `h(x, y) = G(x, p + y)` with `G(x, y) = (g(x, x y) − g(0, 0)) / x`.
fn shifted_field(g: &VectorField, p: &[Rational; 2]) -> VectorField {
    std::array::from_fn(|i| {
        let gi = &g[i];
        let trunc = gi.trunc().map(|d| d.saturating_sub(1));
        let mut out = MultiSeries::zero(gi.variables().to_vec(), trunc);
        for (e, c) in gi.terms() {
            let (k, a1, a2) = (e[0], e[1], e[2]);
            if k + a1 + a2 == 0 {
                continue;
            }
            let xdeg = k + a1 + a2 - 1;
            // (p1 + Y1)^a1 (p2 + Y2)^a2
            for b1 in 0..=a1 {
                let f1 = binomial(a1, b1) * pow(&p[0], a1 - b1);
                if f1.is_zero() {
                    continue;
                }
                for b2 in 0..=a2 {
                    let f2 = binomial(a2, b2) * pow(&p[1], a2 - b2);
                    if f2.is_zero() {
                        continue;
                    }
                    out.add_term(vec![xdeg, b1, b2], c * &f1 * &f2);
                }
            }
        }
        out
    })
}

fn pow(x: &Rational, k: u32) -> Rational {
    num_traits::pow(x.clone(), k as usize)
}

/// Rewrites an interlaced system for `(H − h_1 X) / X`: the new system has
/// `a − x^q` in place of `a`, forcing `d(x) = c(x)/x + x^q g(0,0) + (A − x^q I) p`
/// and the shifted nonlinearity.
pub fn rk_shift(spec: &InterlacedSpec, order: usize) -> Result<ShiftResult> {
    let report = validate_system(&spec.into());
    if !report.is_valid() {
        return Err(Error::Validation(Box::new(report)));
    }
    if order < 2 {
        return Err(Error::InvalidInput("shift needs a solution of order at least 2".into()));
    }
    let h = formal_solution(spec, order)?;
    let p = h.coeff(1);
    let q = spec.q as usize;

    let xq = Poly::monomial(Rational::from_integer(1.into()), q);
    let shifted_a = PolyMat2::scalar(&spec.a.sub(&xq))
        .add(&PolyMat2::scalar_times(&spec.b.shift_up(spec.r as usize), &Mat2::rotation()));
    let e = shifted_a.entries();
    let zero = vec![0u32; 3];
    let d: [Poly; 2] = std::array::from_fn(|i| {
        let g00 = spec.g[i].coeff(&zero);
        spec.c[i]
            .shift_down(1)
            .add(&Poly::monomial(g00, q))
            .add(&e[i][0].scale(&p[0]))
            .add(&e[i][1].scale(&p[1]))
    });
    for di in &d {
        if !di.coeff(0).is_zero() || di.degree().is_some_and(|k| k > q) {
            return Err(Error::InvalidInput(format!("shifted forcing term {di} violates d(0) = 0, deg d ≤ q")));
        }
    }
    let new_spec = InterlacedSpec {
        q: spec.q,
        r: spec.r,
        a: spec.a.sub(&xq),
        b: spec.b.clone(),
        c: d,
        g: shifted_field(&spec.g, &p),
    };
    let new_solution_prefix = formal_solution(&new_spec, order - 1)?;
    Ok(ShiftResult { p, new_spec, new_solution_prefix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odeforms::{example_interlaced, FIELD_VARIABLES};
    use crate::series::{int, rat};

    #[test]
    fn first_example_shift() {
        let s = rk_shift(&example_interlaced(), 10).unwrap();
        assert_eq!(s.p, [int(-1), int(0)]);
        assert_eq!(s.new_spec.c, [Poly::from_ints(&[0, 1]), Poly::from_ints(&[0, -1])]);
        assert_eq!(s.new_spec.a, Poly::from_ints(&[1, -1]));
        assert_eq!(s.new_spec.b, Poly::from_ints(&[1]));
    }

    #[test]
    fn double_shift_gives_third_and_fourth_coefficients() {
        let s1 = rk_shift(&example_interlaced(), 10).unwrap();
        let s2 = rk_shift(&s1.new_spec, 9).unwrap();
        let h = &s2.new_solution_prefix;
        assert_eq!(h.coeff(1), [int(-1), int(3)]);
        assert_eq!(h.coeff(2), [int(0), int(10)]);
    }

    #[test]
    fn unforced_shift_is_trivial() {
        let s = InterlacedSpec::linear(1, 1, Poly::from_ints(&[2]), Poly::from_ints(&[1]), [Poly::zero(), Poly::zero()]);
        let r = rk_shift(&s, 5).unwrap();
        assert_eq!(r.p, [int(0), int(0)]);
        assert!(r.new_spec.c.iter().all(Poly::is_zero));
    }

    #[test]
    fn shift_coherence_with_nonlinearity() {
        let mut s = example_interlaced();
        s.q = 2;
        s.a = Poly::new(vec![int(1), rat(1, 2), int(-1)]);
        s.c = [Poly::from_ints(&[0, 1, 2]), Poly::from_ints(&[0, 0, -1])];
        let g1 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 2, 0], int(1)), (vec![1, 0, 0], int(3))], None);
        let g2 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 1, 1], int(2)), (vec![0, 0, 0], int(1))], None);
        s.g = [g1, g2];
        let n = 15;
        let h = formal_solution(&s, n).unwrap();
        let r = rk_shift(&s, n).unwrap();
        for m in 1..n {
            assert_eq!(r.new_solution_prefix.coeff(m), h.coeff(m + 1), "coefficient {m}");
        }
    }
}
