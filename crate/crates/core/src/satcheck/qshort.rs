//! Positive `q`-short polynomials and compositions `H ∘ P`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Poly;
use crate::odeforms::FormalSolution;
use crate::series::{Rational, TruncatedSeries};
use crate::summation::{multisum_levels, CompositionLevels};

/// Outcome of the `q`-short positivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QShortVerdict {
    pub is_qshort: bool,
    pub nu: u32,
    pub reason: Option<String>,
}

/// Decides whether `p` has order `ν ≥ 1`, a positive order-`ν`
/// coefficient and degree below `(q+1)ν`.
pub fn is_qshort_positive(p: &Poly, q: u32) -> Result<QShortVerdict> {
    let (nu, deg) = match (p.order(), p.degree()) {
        (Some(n), Some(d)) => (n as u32, d as u32),
        _ => return Err(Error::InvalidInput("the zero polynomial has no order".into())),
    };
    let lead = p.coeff(nu as usize);
    let reason = if nu == 0 {
        Some("P(0) ≠ 0".to_string())
    } else if lead <= Rational::from_integer(0.into()) {
        Some(format!("order-{nu} coefficient {lead} is not positive"))
    } else if deg >= (q + 1) * nu {
        Some(format!("deg P = {deg} is not below (q+1)·ν = {}", (q + 1) * nu))
    } else {
        None
    };
    Ok(QShortVerdict { is_qshort: reason.is_none(), nu, reason })
}

/// A positive `q`-short polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QShortPoly {
    poly: Poly,
    nu: u32,
    q: u32,
}

impl QShortPoly {
    pub fn new(poly: Poly, q: u32) -> Result<Self> {
        let v = is_qshort_positive(&poly, q)?;
        match v.reason {
            Some(r) => Err(Error::InvalidInput(format!("{poly} is not {q}-short positive: {r}"))),
            None => Ok(QShortPoly { poly, nu: v.nu, q }),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The order-`ν` coefficient.
    pub fn leading(&self) -> Rational {
        self.poly.coeff(self.nu as usize)
    }

    pub fn to_series(&self, order: usize) -> TruncatedSeries<Rational> {
        self.poly.to_series(order)
    }

    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.poly.coeffs().iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + crate::series::rational_to_f64(c)
        })
    }
}

impl fmt::Display for QShortPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Composition levels `ν_j q` and the composed singular set.
pub fn composition_levels(q: u32, ps: &[QShortPoly]) -> Result<CompositionLevels> {
    let nus: Vec<u32> = ps.iter().map(|p| p.nu).collect();
    multisum_levels(q, &nus)
}

/// `H ∘ P` componentwise, with its certified order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposedSolution {
    pub series: [TruncatedSeries<Rational>; 2],
    pub certified_order: usize,
}

/// `H_i ∘ P` to order `n`, certified to `min(n, ν(N_H + 1) − 1)`.
pub fn compose_solution(h: &FormalSolution, p: &QShortPoly, n: usize) -> Result<ComposedSolution> {
    if p.q != h.q {
        return Err(Error::InvalidInput(format!("P is {}-short but H has q = {}", p.q, h.q)));
    }
    let nu = p.nu as usize;
    let certified = n.min(nu * (h.certified_order + 1) - 1);
    let inner = p.to_series(n);
    let comp = |s: &TruncatedSeries<Rational>| -> Result<TruncatedSeries<Rational>> {
        let outer = s.truncate(h.certified_order.min(n));
        let full = TruncatedSeries::from_poly(outer.coeffs(), n);
        Ok(full.compose(&inner)?.truncate(certified))
    };
    Ok(ComposedSolution { series: [comp(&h.h[0])?, comp(&h.h[1])?], certified_order: certified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odeforms::{example_interlaced, formal_solution};
    use crate::series::{int, rat};

    fn p(v: &[i64]) -> Poly {
        Poly::from_ints(v)
    }

    #[test]
    fn predicate_examples() {
        let v = is_qshort_positive(&p(&[0, 1]), 1).unwrap();
        assert!(v.is_qshort && v.nu == 1);
        assert!(!is_qshort_positive(&p(&[0, 1, 1]), 1).unwrap().is_qshort);
        let v = is_qshort_positive(&p(&[0, 0, 1, 1]), 1).unwrap();
        assert!(v.is_qshort && v.nu == 2);
        assert!(!is_qshort_positive(&p(&[0, -1]), 1).unwrap().is_qshort);
        assert!(!is_qshort_positive(&p(&[1, 1]), 1).unwrap().is_qshort);
        assert!(is_qshort_positive(&Poly::zero(), 1).is_err());
    }

    #[test]
    fn compositions() {
        let h = formal_solution(example_interlaced(), 12).unwrap();
        let id = compose_solution(&h, &QShortPoly::new(p(&[0, 1]), 1).unwrap(), 12).unwrap();
        assert_eq!(id.series[0], h.h[0].truncate(12));
        let sq = compose_solution(&h, &QShortPoly::new(p(&[0, 0, 1]), 1).unwrap(), 8).unwrap();
        for n in 0..=8 {
            let expect = if n % 2 == 0 && n > 0 { h.coeff(n / 2)[0].clone() } else { int(0) };
            assert_eq!(sq.series[0].coeff(n), &expect);
        }
        assert_eq!(sq.series[0].coeff(2), &int(-1));
        let two = compose_solution(&h, &QShortPoly::new(p(&[0, 2]), 1).unwrap(), 10).unwrap();
        for n in 0..=10 {
            assert_eq!(two.series[1].coeff(n), &(h.coeff(n)[1].clone() * rat(1 << n, 1)));
        }
    }

    #[test]
    fn certified_order_scales_with_nu() {
        let h = formal_solution(example_interlaced(), 5).unwrap();
        let c = compose_solution(&h, &QShortPoly::new(p(&[0, 0, 1]), 1).unwrap(), 40).unwrap();
        assert_eq!(c.certified_order, 11);
    }
}
