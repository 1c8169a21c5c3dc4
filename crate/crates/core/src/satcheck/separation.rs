//! Principal parts of `Q_a ∘ P_{j₁} − Q_a ∘ P_{j₂}` and selection of the
//! dominant exponential along a ray.

use std::f64::consts::PI;

use super::qshort::QShortPoly;
use crate::error::{Error, Result};
use crate::matrix::Poly;
use crate::series::{rational_to_f64, LaurentSeries, Rational};
use crate::summation::{roots_of_unity, Direction};

/// Number of candidate rays sampled when the requested ray is not
/// admissible.
pub const RAY_CANDIDATES: usize = 64;
const COS_ZERO: f64 = 1e-12;

/// `Q_a = −Σ_{m<q} a_m X^{m−q}/(q−m)`.
pub fn q_a(a: &Poly, q: u32) -> LaurentSeries<Rational> {
    let terms = (0..q).map(|m| (m as i64 - q as i64, -a.coeff(m as usize) / Rational::from_integer(((q - m) as i64).into())));
    LaurentSeries::pure(terms, 0)
}

/// Principal part of `Q_a ∘ P`, exact.
pub fn composed_principal(a: &Poly, q: u32, p: &QShortPoly) -> Result<LaurentSeries<Rational>> {
    let nu = p.nu() as usize;
    let inner = p.to_series(nu * (q as usize + 1) + 1);
    Ok(q_a(a, q).compose_principal(&inner, 0)?.principal_part())
}

/// Limit sign of `Re L(ρe^{iφ})` as `ρ → 0⁺` for a principal part `L`:
/// `Some(+1)` for `+∞`, `Some(−1)` for `−∞`, `None` if no term has a
/// nonvanishing real part on the ray.
pub fn limit_sign(part: &LaurentSeries<Rational>, phi: f64) -> Option<i32> {
    for (e, c) in part.principal() {
        let v = rational_to_f64(c) * (*e as f64 * phi).cos();
        if v.abs() > COS_ZERO * rational_to_f64(c).abs() {
            return Some(if v > 0.0 { 1 } else { -1 });
        }
    }
    None
}

/// Principal part of `Q∘P_{j1} − Q∘P_{j2}` (indices 1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct PairPrincipal {
    pub j1: usize,
    pub j2: usize,
    pub part: LaurentSeries<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    pub omega: Vec<usize>,
    pub pairwise: Vec<PairPrincipal>,
    /// Pairs whose difference has no principal part.
    pub violations: Vec<(usize, usize)>,
    pub phi: f64,
    pub admissible: bool,
    /// Indices of `Ω` by decreasing growth of `Re Q∘P_j` along the ray.
    pub dominance: Vec<usize>,
    pub j0: Option<usize>,
    /// An admissible ray in `V(θ, k_μ)` when `phi` is not admissible.
    pub suggested_phi: Option<f64>,
}

/// Indices `j` (1-based) with `ν_j θ` a singular direction for level `q`.
pub fn singular_indices(ps: &[QShortPoly], q: u32, theta: Direction) -> Vec<usize> {
    let s = roots_of_unity(q);
    (1..=ps.len()).filter(|&j| s.contains(theta.times(ps[j - 1].nu()))).collect()
}

fn order_along(omega: &[usize], parts: &[PairPrincipal], phi: f64) -> Option<Vec<usize>> {
    let sign = |a: usize, b: usize| -> Option<i32> {
        let pp = parts.iter().find(|p| (p.j1 == a && p.j2 == b) || (p.j1 == b && p.j2 == a))?;
        let s = limit_sign(&pp.part, phi)?;
        Some(if pp.j1 == a { s } else { -s })
    };
    let mut order = omega.to_vec();
    for &a in omega {
        for &b in omega {
            if a != b {
                sign(a, b)?;
            }
        }
    }
    // a before b when Re(Q∘P_a − Q∘P_b) → +∞
    order.sort_by(|&a, &b| if a == b { std::cmp::Ordering::Equal } else if sign(a, b) == Some(1) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater });
    Some(order)
}

/// Exact pairwise principal parts over `Ω` and the dominant index along
/// the ray of angle `phi`.
pub fn exponential_separation(a: &Poly, q: u32, ps: &[QShortPoly], omega: &[usize], phi: f64, theta: Direction) -> Result<SeparationReport> {
    if omega.is_empty() {
        return Err(Error::InvalidInput("Ω is empty".into()));
    }
    if let Some(&j) = omega.iter().find(|&&j| j == 0 || j > ps.len()) {
        return Err(Error::InvalidInput(format!("index {j} is outside 1..={}", ps.len())));
    }
    for (x, px) in ps.iter().enumerate() {
        if ps[..x].iter().any(|py| py.poly() == px.poly()) {
            return Err(Error::InvalidInput(format!("P_{} repeats an earlier polynomial", x + 1)));
        }
    }
    let singles: Vec<LaurentSeries<Rational>> = omega.iter().map(|&j| composed_principal(a, q, &ps[j - 1])).collect::<Result<_>>()?;
    let mut pairwise = Vec::new();
    let mut violations = Vec::new();
    for x in 0..omega.len() {
        for y in x + 1..omega.len() {
            let part = singles[x].sub(&singles[y]).principal_part();
            if !part.has_principal_part() {
                violations.push((omega[x], omega[y]));
            }
            pairwise.push(PairPrincipal { j1: omega[x], j2: omega[y], part });
        }
    }
    let dominance = order_along(omega, &pairwise, phi);
    let admissible = dominance.is_some();
    let suggested_phi = if admissible {
        None
    } else {
        let k_mu = omega.iter().map(|&j| ps[j - 1].nu() * q).max().unwrap_or(q) as f64;
        let start = theta.theta() - PI / (2.0 * k_mu);
        (0..RAY_CANDIDATES)
            .map(|i| start + PI / k_mu * (i as f64 + 0.5) / RAY_CANDIDATES as f64)
            .find(|&c| order_along(omega, &pairwise, c).is_some())
    };
    let dominance = dominance.unwrap_or_default();
    Ok(SeparationReport {
        omega: omega.to_vec(),
        j0: dominance.first().copied(),
        pairwise,
        violations,
        phi,
        admissible,
        dominance,
        suggested_phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    fn qs(v: &[i64], q: u32) -> QShortPoly {
        QShortPoly::new(Poly::from_ints(v), q).unwrap()
    }

    #[test]
    fn three_linear_polynomials() {
        let ps = [qs(&[0, 1], 1), qs(&[0, 2], 1), qs(&[0, 3], 1)];
        let r = exponential_separation(&Poly::from_ints(&[1]), 1, &ps, &[1, 2, 3], 0.0, Direction::zero()).unwrap();
        let coeffs: Vec<Rational> = r.pairwise.iter().map(|p| p.part.coeff(-1)).collect();
        assert_eq!(coeffs, vec![rat(-1, 2), rat(-2, 3), rat(-1, 6)]);
        assert!(r.admissible && r.violations.is_empty());
        assert_eq!(r.j0, Some(3));
        assert_eq!(r.dominance, vec![3, 2, 1]);
    }

    #[test]
    fn single_polynomial() {
        let r = exponential_separation(&Poly::from_ints(&[1]), 1, &[qs(&[0, 1], 1)], &[1], 0.3, Direction::zero()).unwrap();
        assert_eq!(r.j0, Some(1));
        assert!(r.pairwise.is_empty());
    }

    #[test]
    fn equal_leading_terms() {
        let ps = [qs(&[0, 1], 2), qs(&[0, 1, 1], 2)];
        let r = exponential_separation(&Poly::from_ints(&[1]), 2, &ps, &[1, 2], 0.0, Direction::zero()).unwrap();
        // Q∘P_2 − Q∘P_1 = (2X²)^{-1}(1 − (1+X)^{-2}) has principal part 1/X
        let part = &r.pairwise[0].part;
        assert_eq!(part.principal().len(), 1);
        assert_eq!(part.coeff(-1), int(-1));
        assert_eq!(r.j0, Some(2));
    }

    #[test]
    fn inadmissible_ray_gets_a_suggestion() {
        // Q∘P differences are multiples of 1/X; cos φ = 0 kills the real part
        let ps = [qs(&[0, 1], 1), qs(&[0, 2], 1)];
        let r = exponential_separation(&Poly::from_ints(&[1]), 1, &ps, &[1, 2], PI / 2.0, Direction::zero()).unwrap();
        assert!(!r.admissible);
        assert!(r.j0.is_none());
        let s = r.suggested_phi.unwrap();
        assert!(s.abs() < PI / 2.0);
    }

    #[test]
    fn singular_index_set() {
        let ps = [qs(&[0, 1], 2), qs(&[0, 0, 1], 2)];
        assert_eq!(singular_indices(&ps, 2, Direction::from_turn_fraction(1, 4)), vec![2]);
        assert_eq!(singular_indices(&ps, 2, Direction::zero()), vec![1, 2]);
    }
}
