//! Laurent series with a finite principal part.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{rational_to_f64, Coeff, Rational, TruncatedSeries, Valuation};
use crate::error::{Error, Result};

/// `Σ_{m<0} p_m X^m + R(X)` with `R` a truncated power series.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C> {
    principal: BTreeMap<i64, C>,
    regular: TruncatedSeries<C>,
}

impl<C: Coeff> LaurentSeries<C> {
    /// Builds a Laurent series; zero entries of the principal part are
    /// dropped. Panics on a nonnegative principal exponent.
    pub fn new(principal: impl IntoIterator<Item = (i64, C)>, regular: TruncatedSeries<C>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in principal {
            assert!(e < 0, "principal exponents must be negative");
            if !c.is_zero() {
                map.insert(e, c);
            }
        }
        LaurentSeries { principal: map, regular }
    }

    /// Pure principal part `Σ_{m<0} p_m X^m` with zero regular part.
    pub fn pure(principal: impl IntoIterator<Item = (i64, C)>, order: usize) -> Self {
        Self::new(principal, TruncatedSeries::zero(order))
    }

    pub fn from_series(regular: TruncatedSeries<C>) -> Self {
        LaurentSeries { principal: BTreeMap::new(), regular }
    }

    pub fn principal(&self) -> &BTreeMap<i64, C> {
        &self.principal
    }

    pub fn regular(&self) -> &TruncatedSeries<C> {
        &self.regular
    }

    /// Coefficient of `X^e` (negative or within the regular truncation).
    pub fn coeff(&self, e: i64) -> C {
        if e < 0 {
            self.principal.get(&e).cloned().unwrap_or_else(C::zero)
        } else {
            self.regular.coeff(e as usize).clone()
        }
    }

    /// Only the negative-exponent portion, with a zero regular part of the
    /// same truncation order.
    pub fn principal_part(&self) -> Self {
        LaurentSeries { principal: self.principal.clone(), regular: TruncatedSeries::zero(self.regular.order()) }
    }

    pub fn has_principal_part(&self) -> bool {
        !self.principal.is_empty()
    }

    /// Most negative exponent with nonzero coefficient, if any.
    pub fn pole_order(&self) -> Option<i64> {
        self.principal.keys().next().map(|e| -e)
    }

    /// Lowest-order nonzero term `(exponent, coefficient)`.
    pub fn leading_term(&self) -> Option<(i64, C)> {
        if let Some((e, c)) = self.principal.iter().next() {
            return Some((*e, c.clone()));
        }
        match self.regular.valuation() {
            Valuation::Finite(n) => Some((n as i64, self.regular.coeff(n).clone())),
            Valuation::ZeroToOrder(_) => None,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.principal.iter().map(|(e, a)| (*e, a.clone() * c.clone())),
            self.regular.scale(c),
        )
    }

    fn combine(&self, rhs: &Self, sign: C) -> Self {
        let mut map = self.principal.clone();
        for (e, c) in &rhs.principal {
            let cur = map.remove(e).unwrap_or_else(C::zero);
            map.insert(*e, cur + sign.clone() * c.clone());
        }
        let regular = &self.regular + &rhs.regular.scale(&sign);
        Self::new(map, regular)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, C::one())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, -C::one())
    }

    /// Exact Laurent expansion of `self ∘ P` to regular order `order`, for
    /// `self` with a pure principal part and `P(0) = 0`, `P ≢ 0`.
    ///
    /// Writes `P = c X^ν (1 + u)` and expands `P^{-s} = c^{-s} X^{-νs} (1+u)^{-s}`.
    pub fn compose_principal(&self, p: &TruncatedSeries<C>, order: usize) -> Result<Self> {
        if !self.regular.is_zero() {
            return Err(Error::InvalidInput("outer Laurent series must be a pure principal part".into()));
        }
        if !p.coeff(0).is_zero() {
            return Err(Error::NonzeroConstant("composition needs P(0) = 0".into()));
        }
        let nu = match p.valuation() {
            Valuation::Finite(n) => n,
            Valuation::ZeroToOrder(_) => return Err(Error::InvalidInput("P vanishes identically".into())),
        };
        let max_s = self.pole_order().unwrap_or(0) as usize;
        if max_s == 0 {
            return Ok(Self::from_series(TruncatedSeries::zero(order)));
        }
        // P/(c X^ν) must be known to order order + ν·s for every s ≤ max_s.
        let need = order + nu * max_s;
        if p.order() < nu + need {
            return Err(Error::InvalidInput(format!(
                "P certified to order {} but {} is needed",
                p.order(),
                nu + need
            )));
        }
        let lead = p.coeff(nu).clone();
        let unit = p.shift_down(nu).truncate(need).scale(&(C::one() / lead.clone()));
        let inv_unit = unit.inverse()?;
        let inv_lead = C::one() / lead;

        let mut principal: BTreeMap<i64, C> = BTreeMap::new();
        let mut regular: TruncatedSeries<C> = TruncatedSeries::zero(order);
        let mut w_pow = TruncatedSeries::one(need);
        let mut lead_pow = C::one();
        for s in 1..=max_s {
            w_pow = &w_pow * &inv_unit;
            lead_pow = lead_pow * inv_lead.clone();
            let qs = self.coeff(-(s as i64));
            if qs.is_zero() {
                continue;
            }
            let factor = qs * lead_pow.clone();
            let shift = (nu * s) as i64;
            for (k, w) in w_pow.coeffs().iter().enumerate() {
                let e = k as i64 - shift;
                if e > order as i64 {
                    break;
                }
                if w.is_zero() {
                    continue;
                }
                let term = factor.clone() * w.clone();
                if e < 0 {
                    let cur = principal.remove(&e).unwrap_or_else(C::zero);
                    principal.insert(e, cur + term);
                } else {
                    let cur = regular.coeff(e as usize).clone();
                    regular.set_coeff(e as usize, cur + term);
                }
            }
        }
        Ok(Self::new(principal, regular))
    }
}

impl LaurentSeries<Rational> {
    /// Numerical value of the principal part at `z`.
    pub fn eval_principal(&self, z: Complex64) -> Complex64 {
        self.principal
            .iter()
            .map(|(e, c)| rational_to_f64(c) * z.powi(*e as i32))
            .sum()
    }
}

/// Exact Laurent expansion of `Q ∘ P`.
pub fn laurent_compose_q<C: Coeff>(q: &LaurentSeries<C>, p: &TruncatedSeries<C>, order: usize) -> Result<LaurentSeries<C>> {
    q.compose_principal(p, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    fn poly(v: &[Rational], order: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::from_poly(v, order)
    }

    #[test]
    fn compose_minus_inverse_with_2x() {
        let q = LaurentSeries::pure([(-1, int(-1))], 0);
        let l = q.compose_principal(&poly(&[int(0), int(2)], 10), 3).unwrap();
        assert_eq!(l.principal().get(&-1), Some(&rat(-1, 2)));
        assert!(l.regular().is_zero());
    }

    #[test]
    fn compose_half_inverse_square_with_x_plus_x2() {
        // -1/(2X^2) ∘ (X + X^2) = -1/(2X^2) + 1/X - 3/2 + 2X - ...
        let q = LaurentSeries::pure([(-2, rat(-1, 2))], 0);
        let l = q.compose_principal(&poly(&[int(0), int(1), int(1)], 20), 2).unwrap();
        assert_eq!(l.coeff(-2), rat(-1, 2));
        assert_eq!(l.coeff(-1), int(1));
        assert_eq!(l.coeff(0), rat(-3, 2));
        assert_eq!(l.coeff(1), int(2));
        assert_eq!(l.coeff(2), rat(-5, 2));
    }

    #[test]
    fn compose_with_identity() {
        let q = LaurentSeries::pure([(-1, int(-1))], 0);
        let l = q.compose_principal(&poly(&[int(0), int(1)], 10), 4).unwrap();
        assert_eq!(l.principal_part(), LaurentSeries::pure([(-1, int(-1))], 4));
        assert!(l.regular().is_zero());
    }

    #[test]
    fn compose_rejects_zero_inner() {
        let q = LaurentSeries::pure([(-1, int(-1))], 0);
        assert!(q.compose_principal(&TruncatedSeries::zero(5), 2).is_err());
    }

    #[test]
    fn principal_part_examples() {
        let l = LaurentSeries::new([(-1, int(-1))], poly(&[int(1), int(1)], 3));
        assert_eq!(l.principal_part(), LaurentSeries::pure([(-1, int(-1))], 3));

        let l = LaurentSeries::from_series(poly(&[int(0), int(1), int(1)], 3));
        assert!(!l.principal_part().has_principal_part());

        let qa = LaurentSeries::pure([(-1, int(-1))], 0);
        let x = poly(&[int(0), int(1)], 10);
        let two_x = poly(&[int(0), int(2)], 10);
        let diff = qa.compose_principal(&x, 2).unwrap().sub(&qa.compose_principal(&two_x, 2).unwrap());
        assert_eq!(diff.principal_part(), LaurentSeries::pure([(-1, rat(-1, 2))], 2));
    }
}
