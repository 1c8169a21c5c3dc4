//! Polynomial gauge `y = T(x) z` taking a final form with
//! `J(0) = 𝔞I + 𝔟J` to interlaced final form.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Poly, PolyMat2};
use crate::odeforms::{validate_system, FinalFormSpec, InterlacedSpec, VectorField, FIELD_VARIABLES};
use crate::series::{int, MultiSeries, Rational};

/// `T(x) = I + x T_1 + … + x^{q−r} T_{q−r}`, the rotation-dilation blocks
/// `N_0..N_{q−r}` of `D(x) = a(x) I + x^r N(x)` and the remainder `E(x)` in
/// `A T − T D − x^{q+1} T' = x^{q+1} E`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeResult {
    pub t: PolyMat2,
    pub n_mats: Vec<Mat2>,
    pub e: PolyMat2,
}

impl GaugeResult {
    /// `N(x) = Σ N_j x^j`.
    pub fn n_poly(&self) -> PolyMat2 {
        PolyMat2::new(self.n_mats.clone())
    }

    /// `D(x) = a(x) I + x^r N(x)`.
    pub fn d_matrix(&self, ff: &FinalFormSpec) -> PolyMat2 {
        PolyMat2::scalar(&ff.a).add(&self.n_poly().shift_up(ff.r as usize))
    }

    /// `(𝔞_j, 𝔟_j)` for every block.
    pub fn rotation_parts(&self) -> Vec<(Rational, Rational)> {
        self.n_mats.iter().filter_map(Mat2::rotation_dilation_parts).collect()
    }
}

/// `A T − T D − x^{q+1} T' − x^{q+1} E`; zero exactly when the gauge
/// identity holds.
pub fn gauge_identity_residual(ff: &FinalFormSpec, g: &GaugeResult) -> PolyMat2 {
    let q1 = ff.q as usize + 1;
    let a = ff.linear_part();
    a.mul(&g.t)
        .sub(&g.t.mul(&g.d_matrix(ff)))
        .sub(&g.t.derivative().shift_up(q1))
        .sub(&g.e.shift_up(q1))
}

fn check_preconditions(ff: &FinalFormSpec) -> Result<Rational> {
    let report = validate_system(&ff.into());
    if !report.is_valid() {
        return Err(Error::Validation(Box::new(report)));
    }
    if ff.r < 1 || ff.r > ff.q {
        return Err(Error::InvalidInput(format!("gauge reduction needs 1 ≤ r ≤ q, got r = {}", ff.r)));
    }
    match ff.j.coeff(0).rotation_dilation_parts() {
        Some((_, b)) if !b.is_zero() => Ok(b),
        _ => Err(Error::InvalidInput("J(0) must have the shape (𝔞, −𝔟; 𝔟, 𝔞) with 𝔟 ≠ 0".into())),
    }
}

/// Solves `[J T − T N]_k = 0` for `k = 1..q−r`: with
/// `M = J_k + Σ_{j=1}^{k−1} (J_j T_{k−j} − T_{k−j} N_j) = (α, β; γ, δ)`,
/// `T_k = (−γ−β, α−δ; α−δ, γ+β) / 4𝔟` and `N_k = M + 𝔟 (J T_k − T_k J)`.
pub fn compute_gauge(ff: &FinalFormSpec) -> Result<GaugeResult> {
    let b0 = check_preconditions(ff)?;
    let steps = (ff.q - ff.r) as usize;
    let rot = Mat2::rotation();
    let jk = |k: usize| ff.j.coeff(k);

    let mut t_mats = vec![Mat2::identity()];
    let mut n_mats = vec![jk(0)];
    let inv4b = Rational::one() / (b0.clone() * int(4));
    for k in 1..=steps {
        let mut m = jk(k);
        for j in 1..k {
            m = m.add(&jk(j).mul(&t_mats[k - j])).sub(&t_mats[k - j].mul(&n_mats[j]));
        }
        let [[al, be], [ga, de]] = m.0.clone();
        let off = &al - &de;
        let diag = &ga + &be;
        let tk = Mat2::new(-diag.clone(), off.clone(), off, diag).scale(&inv4b);
        let nk = m.add(&rot.mul(&tk).sub(&tk.mul(&rot)).scale(&b0));
        t_mats.push(tk);
        n_mats.push(nk);
    }

    let q1 = ff.q as usize + 1;
    let mut g = GaugeResult { t: PolyMat2::new(t_mats), n_mats, e: PolyMat2::zero() };
    let p = gauge_identity_residual(ff, &g);
    if p.coeffs().iter().take(q1).any(|m| !m.is_zero()) {
        return Err(Error::InvalidInput("gauge recursion left terms below x^{q+1}".into()));
    }
    g.e = p.shift_down(q1);
    Ok(g)
}

fn x_series(p: &Poly, trunc: u32) -> MultiSeries<Rational> {
    let terms = p.coeffs().iter().enumerate().map(|(k, c)| (vec![k as u32, 0, 0], c.clone()));
    MultiSeries::with_vars(&FIELD_VARIABLES, terms, Some(trunc))
}

fn linear_form(row: &[Poly; 2], trunc: u32) -> Result<MultiSeries<Rational>> {
    let y1 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 1, 0], int(1))], None);
    let y2 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 0, 1], int(1))], None);
    x_series(&row[0], trunc).mul(&y1)?.add(&x_series(&row[1], trunc).mul(&y2)?)
}

/// `g(x, y)` with `y = (s_1, s_2)`, both multivariate in `(X, Y1, Y2)`.
fn compose_field(g: &MultiSeries<Rational>, s: &[MultiSeries<Rational>; 2], trunc: u32) -> Result<MultiSeries<Rational>> {
    let mut out = MultiSeries::with_vars(&FIELD_VARIABLES, [], Some(trunc));
    for (e, c) in g.terms() {
        let mut term = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![e[0], 0, 0], c.clone())], Some(trunc));
        for (v, si) in s.iter().enumerate() {
            for _ in 0..e[v + 1] {
                term = term.mul(si)?;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The interlaced system satisfied by `z = T(x)^{-1} y`: `a + x^r Σ𝔞_j x^j`,
/// `b = Σ𝔟_j x^j`, `c = 0` and `g_T(x, z) = T^{-1} (E z + g(x, T z))`,
/// truncated at total degree `min(D_g, order)`.
pub fn pullback_system(ff: &FinalFormSpec, gauge: &GaugeResult, order: usize) -> Result<InterlacedSpec> {
    let parts = gauge.rotation_parts();
    if parts.len() != gauge.n_mats.len() {
        return Err(Error::InvalidInput("gauge blocks are not rotation-dilations".into()));
    }
    let r = ff.r as usize;
    let a_shift = Poly::new(parts.iter().map(|(a, _)| a.clone()).collect());
    let a_new = ff.a.add(&a_shift.shift_up(r));
    let b_new = Poly::new(parts.iter().map(|(_, b)| b.clone()).collect());

    let trunc = ff.g.iter().filter_map(|g| g.trunc()).fold(order as u32, u32::min);
    let t_inv = gauge
        .t
        .inverse_series(trunc as usize)
        .ok_or_else(|| Error::NotInvertible("T(0) is singular".into()))?;
    let t_rows = gauge.t.entries();
    let e_rows = gauge.e.entries();
    let tz = [linear_form(&t_rows[0], trunc)?, linear_form(&t_rows[1], trunc)?];
    let inner: Vec<MultiSeries<Rational>> = (0..2)
        .map(|l| linear_form(&e_rows[l], trunc)?.add(&compose_field(&ff.g[l], &tz, trunc)?))
        .collect::<Result<_>>()?;
    let mut g_new: Vec<MultiSeries<Rational>> = Vec::with_capacity(2);
    for row in &t_inv {
        let mut acc = MultiSeries::with_vars(&FIELD_VARIABLES, [], Some(trunc));
        for (l, entry) in row.iter().enumerate() {
            let coef = x_series(&Poly::from_series(entry), trunc);
            acc = acc.add(&coef.mul(&inner[l])?)?;
        }
        g_new.push(acc);
    }
    let g: VectorField = [g_new[0].clone(), g_new[1].clone()];
    Ok(InterlacedSpec { q: ff.q, r: ff.r, a: a_new, b: b_new, c: [Poly::zero(), Poly::zero()], g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odeforms::{example_final_form, example_interlaced, formal_solution, zero_field};
    use crate::series::rat;

    #[test]
    fn worked_final_form() {
        let ff = example_final_form();
        let g = compute_gauge(&ff).unwrap();
        assert_eq!(g.t.coeff(1), Mat2::new(int(0), rat(1, 4), rat(1, 4), int(0)));
        assert_eq!(g.n_mats[1], Mat2::identity().scale(&rat(1, 2)));
        assert!(g.t.coeff(2).is_zero());
        assert!(gauge_identity_residual(&ff, &g).is_zero());
        let spec = pullback_system(&ff, &g, 10).unwrap();
        assert_eq!(spec.a, Poly::new(vec![int(1), int(0), rat(1, 2)]));
        assert_eq!(spec.b, Poly::from_ints(&[1]));
    }

    #[test]
    fn constant_j_gives_identity_gauge() {
        let ff = FinalFormSpec {
            q: 3,
            r: 1,
            a: Poly::from_ints(&[2]),
            j: PolyMat2::constant(Mat2::rotation_dilation(int(1), int(-2))),
            g: zero_field(),
        };
        let g = compute_gauge(&ff).unwrap();
        assert_eq!(g.t, PolyMat2::constant(Mat2::identity()));
        assert_eq!(g.n_mats[0], ff.j.coeff(0));
        assert!(g.e.is_zero());
        let spec = pullback_system(&ff, &g, 8).unwrap();
        assert_eq!(spec.a, Poly::new(vec![int(2), int(1)]));
        assert!(spec.g.iter().all(MultiSeries::is_zero));
    }

    #[test]
    fn r_equal_q_has_no_steps() {
        let mut ff = example_final_form();
        ff.r = 2;
        ff.j = PolyMat2::constant(Mat2::rotation());
        let g = compute_gauge(&ff).unwrap();
        assert_eq!(g.n_mats.len(), 1);
        assert_eq!(g.t, PolyMat2::constant(Mat2::identity()));
    }

    #[test]
    fn interlaced_system_needs_no_gauge() {
        let mut s = example_interlaced();
        s.q = 3;
        s.a = Poly::from_ints(&[1, 0, 2, 5]);
        s.b = Poly::from_ints(&[1, 3, -1]);
        let g = compute_gauge(&s.as_final_form()).unwrap();
        assert_eq!(g.t, PolyMat2::constant(Mat2::identity()));
    }

    #[test]
    fn solutions_correspond() {
        let mut ff = example_final_form();
        let g1 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![1, 0, 0], int(1)), (vec![0, 2, 0], int(1))], None);
        let g2 = MultiSeries::with_vars(&FIELD_VARIABLES, [(vec![0, 1, 1], rat(1, 2)), (vec![2, 0, 0], int(-1))], None);
        ff.g = [g1, g2];
        let g = compute_gauge(&ff).unwrap();
        let n = 20;
        let spec = pullback_system(&ff, &g, n).unwrap();
        let h_new = formal_solution(&spec, n).unwrap();
        assert!(h_new.certified_order >= n);
        let h_ff = formal_solution(&ff, n).unwrap();
        assert!(!h_ff.is_zero());
        assert_eq!(g.t.apply_series(&h_new.h), h_ff.h);
    }
}
