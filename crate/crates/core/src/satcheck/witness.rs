//! Order-`N` falsification of relations `F ∘ {H_i ∘ P_j} = 0` and the
//! derivative witness search.

use std::collections::HashMap;

use super::qshort::{compose_solution, QShortPoly};
use crate::error::{Error, Result};
use crate::odeforms::{formal_solution, FormalSolution, SystemSpec};
use crate::series::{mv_substitute, MultiSeries, Rational, TruncatedSeries, Valuation};

/// Variable names `X, Z11, Z21, Z12, Z22, …` for `n` polynomials; `Z_ij`
/// stands for `H_i ∘ P_j`.
pub fn witness_variables(n: usize) -> Vec<String> {
    let mut v = vec!["X".to_string()];
    for j in 1..=n {
        for i in 1..=2 {
            v.push(format!("Z{i}{j}"));
        }
    }
    v
}

/// Parses `Z{i}{j}` into `(i, j)`.
pub fn parse_z_name(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix('Z')?;
    let mut chars = rest.chars();
    let i = chars.next()?.to_digit(10)? as usize;
    let j: usize = chars.as_str().parse().ok()?;
    ((i == 1 || i == 2) && j >= 1).then_some((i, j))
}

/// A nonzero composed derivative `(∂^d F/∂Z_{ij}^d) ∘ {H ∘ P}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeWitness {
    pub i: usize,
    pub j: usize,
    pub d: u32,
    pub first_nonzero_order: usize,
    pub certified_order: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    /// Order to which `F ∘ {H_i ∘ P_j}` is known exactly.
    pub certified_order: usize,
    pub first_nonzero_order: Option<usize>,
    pub leading_coefficient: Option<Rational>,
    pub derivative: Option<DerivativeWitness>,
    /// Every derivative in every variable of `Λ_F` vanishes to its
    /// certified order.
    pub exhausted: bool,
    /// `(i, j)` with `F` depending on `Z_ij`.
    pub lambda: Vec<(usize, usize)>,
}

impl WitnessReport {
    /// `F ∘ {H_i ∘ P_j}` vanishes to the certified order.
    pub fn is_zero_to_order(&self) -> bool {
        self.first_nonzero_order.is_none()
    }
}

/// `F` with `Z_ij ↦ H_i ∘ P_j` for the given compositions.
pub struct Substitution {
    subs: HashMap<String, TruncatedSeries<Rational>>,
}

impl Substitution {
    pub fn new(h: &FormalSolution, ps: &[QShortPoly], order: usize) -> Result<Self> {
        let mut subs = HashMap::new();
        for (j, p) in ps.iter().enumerate() {
            let c = compose_solution(h, p, order)?;
            for i in 0..2 {
                subs.insert(format!("Z{}{}", i + 1, j + 1), c.series[i].clone());
            }
        }
        Ok(Substitution { subs })
    }

    pub fn series(&self, i: usize, j: usize) -> Option<&TruncatedSeries<Rational>> {
        self.subs.get(&format!("Z{i}{j}"))
    }

    pub fn apply(&self, f: &MultiSeries<Rational>) -> Result<TruncatedSeries<Rational>> {
        for v in f.variables() {
            if v != "X" && !self.subs.contains_key(v) {
                return Err(Error::InvalidInput(format!("unknown variable {v}")));
            }
        }
        mv_substitute(f, &self.subs)
    }
}

fn first_nonzero(s: &TruncatedSeries<Rational>) -> Option<usize> {
    match s.valuation() {
        Valuation::Finite(n) => Some(n),
        Valuation::ZeroToOrder(_) => None,
    }
}

/// Searches for a certified nonzero coefficient of `F ∘ {H_i ∘ P_j}` with
/// `H` the formal solution of `spec` to order `n`.
pub fn witness_search(f: &MultiSeries<Rational>, spec: impl Into<SystemSpec>, ps: &[QShortPoly], n: usize) -> Result<WitnessReport> {
    let h = formal_solution(spec, n)?;
    witness_search_with(f, &h, ps, n)
}

/// As [`witness_search`] for a precomputed solution.
pub fn witness_search_with(f: &MultiSeries<Rational>, h: &FormalSolution, ps: &[QShortPoly], n: usize) -> Result<WitnessReport> {
    let sub = Substitution::new(h, ps, n)?;
    let value = sub.apply(f)?;
    let mut lambda: Vec<(usize, usize, usize)> = f
        .variables()
        .iter()
        .enumerate()
        .filter(|(v, _)| f.depends_on(*v))
        .filter_map(|(v, name)| parse_z_name(name).map(|(i, j)| (i, j, v)))
        .collect();
    lambda.sort_by_key(|&(i, j, _)| (j, i));
    let mut report = WitnessReport {
        certified_order: value.order(),
        first_nonzero_order: first_nonzero(&value),
        leading_coefficient: first_nonzero(&value).map(|k| value.coeff(k).clone()),
        derivative: None,
        exhausted: false,
        lambda: lambda.iter().map(|&(i, j, _)| (i, j)).collect(),
    };
    if report.first_nonzero_order.is_some() {
        return Ok(report);
    }
    let max_d = lambda.iter().map(|&(_, _, v)| f.degree_in(v)).max().unwrap_or(0);
    for d in 1..=max_d {
        for &(i, j, v) in &lambda {
            let g = f.derivative_n(v, d);
            if g.is_zero() {
                continue;
            }
            let gv = sub.apply(&g)?;
            if let Some(k) = first_nonzero(&gv) {
                report.derivative = Some(DerivativeWitness { i, j, d, first_nonzero_order: k, certified_order: gv.order() });
                return Ok(report);
            }
        }
    }
    report.exhausted = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Poly;
    use crate::odeforms::example_interlaced;
    use crate::series::int;

    fn ps() -> Vec<QShortPoly> {
        vec![QShortPoly::new(Poly::from_ints(&[0, 1]), 1).unwrap()]
    }

    fn f(terms: Vec<(Vec<u32>, i64)>) -> MultiSeries<Rational> {
        MultiSeries::with_vars(&["X", "Z11", "Z21"], terms.into_iter().map(|(e, c)| (e, int(c))), None)
    }

    #[test]
    fn names() {
        assert_eq!(witness_variables(2), vec!["X", "Z11", "Z21", "Z12", "Z22"]);
        assert_eq!(parse_z_name("Z213"), Some((2, 13)));
        assert_eq!(parse_z_name("Z31"), None);
    }

    #[test]
    fn linear_relation_is_falsified_at_order_one() {
        let r = witness_search(&f(vec![(vec![0, 1, 0], 1)]), example_interlaced(), &ps(), 20).unwrap();
        assert_eq!(r.first_nonzero_order, Some(1));
        assert_eq!(r.leading_coefficient, Some(int(-1)));
        assert_eq!(r.certified_order, 20);
        assert_eq!(r.lambda, vec![(1, 1)]);
    }

    #[test]
    fn square_is_falsified_at_order_two() {
        let r = witness_search(&f(vec![(vec![0, 2, 0], 1)]), example_interlaced(), &ps(), 20).unwrap();
        assert_eq!(r.first_nonzero_order, Some(2));
        assert_eq!(r.leading_coefficient, Some(int(1)));
    }

    #[test]
    fn commutator_is_exhausted() {
        let r = witness_search(&f(vec![(vec![0, 1, 1], 1), (vec![0, 1, 1], -1)]), example_interlaced(), &ps(), 20).unwrap();
        assert!(r.is_zero_to_order());
        assert!(r.exhausted && r.lambda.is_empty() && r.derivative.is_none());
    }

    #[test]
    fn derivative_witness_for_a_true_relation() {
        // F = Z11 − Σ h_n X^n vanishes on H to order 10 while ∂F/∂Z11 = 1
        let h = formal_solution(example_interlaced(), 10).unwrap();
        let mut terms: Vec<(Vec<u32>, Rational)> = vec![(vec![0, 1, 0], int(1))];
        for n in 1..=10 {
            terms.push((vec![n as u32, 0, 0], -h.coeff(n)[0].clone()));
        }
        let g = MultiSeries::with_vars(&["X", "Z11", "Z21"], terms, None);
        let r = witness_search_with(&g, &h, &ps(), 10).unwrap();
        assert!(r.is_zero_to_order());
        let d = r.derivative.unwrap();
        assert_eq!((d.i, d.j, d.d, d.first_nonzero_order), (1, 1, 1, 0));
    }
}
