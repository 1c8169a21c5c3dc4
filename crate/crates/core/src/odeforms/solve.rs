//! Formal solutions by coefficient matching, residuals and Gevrey fits.

use nalgebra::{Matrix3, Vector3};
use num_traits::Zero;

use super::{truncate_pair, SystemSpec};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::series::{int, ln_abs_rational, substitute_to_order, Rational, TruncatedSeries};

/// The unique formal solution `H` with `H(0) = 0`, computed to `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSolution {
    pub h: [TruncatedSeries<Rational>; 2],
    /// Coefficients up to this order are determined by the system data.
    pub certified_order: usize,
    pub q: u32,
    pub source: SystemSpec,
}

impl FormalSolution {
    /// Order the series were computed to.
    pub fn order(&self) -> usize {
        self.h[0].order()
    }

    /// `h_n = (H_1[n], H_2[n])`.
    pub fn coeff(&self, n: usize) -> [Rational; 2] {
        [self.h[0].coeff(n).clone(), self.h[1].coeff(n).clone()]
    }

    /// Both components are zero to their order.
    pub fn is_zero(&self) -> bool {
        self.h.iter().all(TruncatedSeries::is_zero)
    }
}

/// `[x^k] g(x, H(x))` for each component, with `H` known through order `k`.
fn field_coeff(spec: &SystemSpec, h: &[Vec<Rational>; 2], k: usize) -> [Rational; 2] {
    let g = spec.nonlinearity();
    if g.iter().all(|gi| gi.is_zero()) {
        return [Rational::zero(), Rational::zero()];
    }
    let hs: [TruncatedSeries<Rational>; 2] = std::array::from_fn(|i| TruncatedSeries::from_poly(&h[i][..=k.min(h[i].len() - 1)], k));
    std::array::from_fn(|i| substitute_to_order(&g[i], &[None, Some(&hs[0]), Some(&hs[1])], k).coeff(k).clone())
}

/// Matches coefficients of `X^1..X^N` in `X^{q+1} H' = A H + X^{q+1} g(X, H) + c`:
/// `A(0) h_m = (m − q) h_{m−q} − Σ_{j≥1} A_j h_{m−j} − [X^{m−q−1}] g(X, H) − c_m`.
pub fn formal_solution(spec: impl Into<SystemSpec>, order: usize) -> Result<FormalSolution> {
    let spec = spec.into();
    if order < 1 {
        return Err(Error::InvalidInput("solution order must be at least 1".into()));
    }
    let q = spec.q() as usize;
    let a = spec.linear_part();
    let c = spec.forcing();
    if !c[0].coeff(0).is_zero() || !c[1].coeff(0).is_zero() {
        return Err(Error::RecursionBlocked { order: 0, reason: "c(0) ≠ 0 admits no solution with H(0) = 0".into() });
    }
    let a0_inv = a.coeff(0).inverse().ok_or_else(|| Error::RecursionBlocked {
        order: 1,
        reason: "A(0) is singular".into(),
    })?;
    let a_coeffs: Vec<Mat2> = (0..=order).map(|j| a.coeff(j)).collect();

    let mut h: [Vec<Rational>; 2] = [vec![Rational::zero(); order + 1], vec![Rational::zero(); order + 1]];
    for m in 1..=order {
        let mut rhs = [-c[0].coeff(m), -c[1].coeff(m)];
        if m > q {
            let f = int((m - q) as i64);
            for i in 0..2 {
                rhs[i] += &f * &h[i][m - q];
            }
            let gk = field_coeff(&spec, &h, m - q - 1);
            for i in 0..2 {
                rhs[i] -= &gk[i];
            }
        }
        for (j, aj) in a_coeffs.iter().enumerate().take(m).skip(1) {
            if aj.is_zero() {
                continue;
            }
            let v = aj.apply(&[h[0][m - j].clone(), h[1][m - j].clone()]);
            rhs[0] -= &v[0];
            rhs[1] -= &v[1];
        }
        let hm = a0_inv.apply(&rhs);
        let [h1, h2] = hm;
        h[0][m] = h1;
        h[1][m] = h2;
    }
    let certified_order = spec.certified_limit().map_or(order, |l| l.min(order));
    let [h1, h2] = h;
    Ok(FormalSolution {
        h: [TruncatedSeries::new(h1), TruncatedSeries::new(h2)],
        certified_order,
        q: spec.q(),
        source: spec,
    })
}

/// `X^{q+1} H' − A H − X^{q+1} g(X, H) − c` modulo `X^{N+1}`, with `H`
/// read as a polynomial.
pub fn ode_residual(spec: impl Into<SystemSpec>, h: &[TruncatedSeries<Rational>; 2], order: usize) -> Result<[TruncatedSeries<Rational>; 2]> {
    let spec = spec.into();
    if !h[0].coeff(0).is_zero() || !h[1].coeff(0).is_zero() {
        return Err(Error::NonzeroConstant("residual needs H(0) = 0".into()));
    }
    let q1 = spec.q() as usize + 1;
    let hp = truncate_pair(h, order);
    let ah = spec.linear_part().apply_series(&hp);
    let g = spec.nonlinearity();
    let c = spec.forcing();
    Ok(std::array::from_fn(|i| {
        let deriv = TruncatedSeries::from_poly(hp[i].derivative().coeffs(), order).shift_up(q1);
        let gi = substitute_to_order(&g[i], &[None, Some(&hp[0]), Some(&hp[1])], order).shift_up(q1);
        let ci = c[i].to_series(order);
        &(&(&deriv - &ah[i]) - &gi) - &ci
    }))
}

/// Least-squares fit of `log|h_n| ≈ s·n log n + n log c + κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GevreyReport {
    pub s_estimate: f64,
    pub constant_estimate: f64,
    /// `s_estimate` above the divergence threshold: numerically divergent
    /// to the fitted order, not a proof.
    pub divergent_flag: bool,
    pub points_used: usize,
    pub order: usize,
}

/// `s` above this counts as numerically divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 0.5;

/// Gevrey fit of the Euclidean coefficient norms of the given components.
pub fn gevrey_estimate_series(components: &[TruncatedSeries<Rational>]) -> Result<GevreyReport> {
    let order = components.iter().map(|c| c.order()).min().unwrap_or(0);
    let mut pts = Vec::new();
    let mut any_nonzero = false;
    for n in 1..=order {
        let logs: Vec<f64> = components.iter().filter(|c| !c.coeff(n).is_zero()).map(|c| ln_abs_rational(c.coeff(n))).collect();
        if logs.is_empty() {
            continue;
        }
        any_nonzero = true;
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let norm = m + 0.5 * logs.iter().map(|l| (2.0 * (l - m)).exp()).sum::<f64>().ln();
        pts.push((n as f64, norm));
    }
    if !any_nonzero {
        return Ok(GevreyReport { s_estimate: 0.0, constant_estimate: 0.0, divergent_flag: false, points_used: 0, order });
    }
    if pts.len() < 3 {
        return Err(Error::TooFewCoefficients { needed: 3, available: pts.len() });
    }
    let mut ata = Matrix3::<f64>::zeros();
    let mut aty = Vector3::<f64>::zeros();
    for &(n, y) in &pts {
        let row = Vector3::new(n * n.ln(), n, 1.0);
        ata += row * row.transpose();
        aty += row * y;
    }
    let sol = ata
        .try_inverse()
        .map(|inv| inv * aty)
        .ok_or(Error::TooFewCoefficients { needed: 3, available: pts.len() })?;
    let s = sol[0];
    Ok(GevreyReport {
        s_estimate: s,
        constant_estimate: sol[1].exp(),
        divergent_flag: s > DIVERGENCE_THRESHOLD,
        points_used: pts.len(),
        order,
    })
}

/// Gevrey fit of a formal solution over its certified coefficients.
pub fn gevrey_estimate(h: &FormalSolution) -> Result<GevreyReport> {
    let n = h.certified_order;
    gevrey_estimate_series(&[h.h[0].truncate(n), h.h[1].truncate(n)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Poly;
    use crate::odeforms::{example_interlaced, InterlacedSpec, FIELD_VARIABLES};
    use crate::series::{rat, MultiSeries};

    #[test]
    fn first_example_coefficients() {
        let h = formal_solution(example_interlaced(), 4).unwrap();
        let expect = [(-1, 0), (-1, 1), (-1, 3), (0, 10)];
        for (n, (a, b)) in expect.iter().enumerate() {
            assert_eq!(h.coeff(n + 1), [int(*a), int(*b)], "h_{}", n + 1);
        }
        assert_eq!(h.certified_order, 4);
    }

    #[test]
    fn prefix_stability() {
        let h2 = formal_solution(example_interlaced(), 2).unwrap();
        let h4 = formal_solution(example_interlaced(), 4).unwrap();
        assert_eq!(h2.h[0], h4.h[0].truncate(2));
        assert_eq!(h2.h[1], h4.h[1].truncate(2));
    }

    #[test]
    fn unforced_linear_system_has_zero_solution() {
        let s = InterlacedSpec::linear(2, 1, Poly::from_ints(&[1, 2]), Poly::from_ints(&[3]), [Poly::zero(), Poly::zero()]);
        assert!(formal_solution(&s, 10).unwrap().is_zero());
    }

    #[test]
    fn residual_of_zero_is_minus_forcing() {
        let z = [TruncatedSeries::zero(6), TruncatedSeries::zero(6)];
        let r = ode_residual(example_interlaced(), &z, 6).unwrap();
        assert_eq!(r[0], TruncatedSeries::from_poly(&[int(0), int(-1)], 6));
        assert!(r[1].is_zero());
    }

    #[test]
    fn residual_vanishes_with_nonlinearity() {
        let mut s = example_interlaced();
        s.q = 2;
        s.a = Poly::new(vec![int(1), rat(1, 2), int(-1)]);
        let g1 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 2, 0], int(1)), (vec![1, 0, 1], rat(-1, 3))], None);
        let g2 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 1, 1], int(2)), (vec![2, 0, 0], int(1))], None);
        s.g = [g1, g2];
        let h = formal_solution(&s, 25).unwrap();
        let r = ode_residual(&s, &h.h, 25).unwrap();
        assert!(r[0].is_zero() && r[1].is_zero());
    }

    #[test]
    fn truncated_nonlinearity_limits_certification() {
        let mut s = example_interlaced();
        let g = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 2, 0], int(1))], Some(3));
        s.g = [g.clone(), g];
        let h = formal_solution(&s, 20).unwrap();
        assert_eq!(h.certified_order, 5);
    }

    #[test]
    fn gevrey_fit_of_first_example() {
        let h = formal_solution(example_interlaced(), 40).unwrap();
        let rep = gevrey_estimate(&h).unwrap();
        assert!((rep.s_estimate - 1.0).abs() < 0.1, "{rep:?}");
        assert!(rep.divergent_flag);
    }

    #[test]
    fn gevrey_fit_of_geometric_and_zero() {
        let geo = TruncatedSeries::new((0..30).map(|n| rat(1, 1 << n)).collect());
        let rep = gevrey_estimate_series(&[geo]).unwrap();
        assert!(rep.s_estimate.abs() < 1e-9 && !rep.divergent_flag, "{rep:?}");
        let rep = gevrey_estimate_series(&[TruncatedSeries::zero(30)]).unwrap();
        assert_eq!(rep.s_estimate, 0.0);
        assert!(!rep.divergent_flag);
    }

    #[test]
    fn too_few_coefficients() {
        let s = TruncatedSeries::from_poly(&[int(0), int(1)], 1);
        assert!(matches!(gevrey_estimate_series(&[s]), Err(Error::TooFewCoefficients { .. })));
    }
}
