//! Sparse multivariate series truncated by total degree.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::{rational_to_f64, Coeff, Rational, TruncatedSeries};
use crate::error::{Error, Result};

/// `Σ c_α V^α` over an ordered variable list, truncated at total degree
/// `trunc` (`None`: an exact polynomial). No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<C> {
    variables: Vec<String>,
    terms: BTreeMap<Vec<u32>, C>,
    trunc: Option<u32>,
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn min_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Coeff> MultiSeries<C> {
    pub fn zero(variables: Vec<String>, trunc: Option<u32>) -> Self {
        MultiSeries { variables, terms: BTreeMap::new(), trunc }
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated exponents add
    /// up, zeros and terms above the truncation are dropped.
    pub fn from_terms(
        variables: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, C)>,
        trunc: Option<u32>,
    ) -> Self {
        let mut s = Self::zero(variables, trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Convenience for variable names given as string slices.
    pub fn with_vars(names: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, C)>, trunc: Option<u32>) -> Self {
        Self::from_terms(names.iter().map(|s| s.to_string()).collect(), terms, trunc)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: C) {
        assert_eq!(exponents.len(), self.variables.len(), "exponent arity mismatch");
        if let Some(d) = self.trunc {
            if degree(&exponents) > d {
                return;
            }
        }
        let cur = self.terms.remove(&exponents).unwrap_or_else(C::zero);
        let next = cur + c;
        if !next.is_zero() {
            self.terms.insert(exponents, next);
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Largest total degree among stored terms.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| degree(e)).max().unwrap_or(0)
    }

    /// Largest exponent of variable `v` among stored terms.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Whether setting variable `v` to zero changes the series.
    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    pub fn coeff(&self, exponents: &[u32]) -> C {
        self.terms.get(exponents).cloned().unwrap_or_else(C::zero)
    }

    fn check_vars(&self, rhs: &Self) -> Result<()> {
        if self.variables != rhs.variables {
            return Err(Error::InvalidInput(format!(
                "variable lists differ: {:?} vs {:?}",
                self.variables, rhs.variables
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_vars(rhs)?;
        let trunc = min_trunc(self.trunc, rhs.trunc);
        let terms = self.terms.iter().chain(rhs.terms.iter()).map(|(e, c)| (e.clone(), c.clone()));
        Ok(Self::from_terms(self.variables.clone(), terms, trunc))
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone()));
        Self::from_terms(self.variables.clone(), terms, self.trunc)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let terms = self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c.clone()));
        Self::from_terms(self.variables.clone(), terms, self.trunc)
    }

    /// Product, truncated at the smaller of the two total degrees.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_vars(rhs)?;
        let trunc = min_trunc(self.trunc, rhs.trunc);
        let mut out = Self::zero(self.variables.clone(), trunc);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// `∂/∂V_v`; the truncation degree drops by one.
    pub fn derivative(&self, v: usize) -> Self {
        let trunc = self.trunc.map(|d| d.saturating_sub(1));
        let mut out = Self::zero(self.variables.clone(), trunc);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            out.add_term(e2, c.clone() * C::from_i64(e[v] as i64));
        }
        out
    }

    /// `∂^d/∂V_v^d`.
    pub fn derivative_n(&self, v: usize, d: u32) -> Self {
        (0..d).fold(self.clone(), |acc, _| acc.derivative(v))
    }

    /// Coefficient series of `V_v^k`: the terms with that exponent, with
    /// `V_v` removed (exponent set to zero).
    pub fn coefficient_of_power(&self, v: usize, k: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[v] == k).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[v] = 0;
            (e2, c.clone())
        });
        Self::from_terms(self.variables.clone(), terms, self.trunc)
    }

    /// Re-expresses the series over a superset of its variables (matched by
    /// name, new variables get exponent zero).
    pub fn embed(&self, variables: &[String]) -> Result<Self> {
        let map: Vec<usize> = self
            .variables
            .iter()
            .map(|v| {
                variables
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::InvalidInput(format!("variable {v} missing from target list")))
            })
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; variables.len()];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            (e2, c.clone())
        });
        Ok(Self::from_terms(variables.to_vec(), terms, self.trunc))
    }

    /// Substitutes `V_from := V_to` (exponents merge), keeping the variable
    /// list. Used for diagonal restrictions such as `B(X, Y, Y)`.
    pub fn identify(&self, from: usize, to: usize) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = e.clone();
            e2[to] += e2[from];
            e2[from] = 0;
            (e2, c.clone())
        });
        Self::from_terms(self.variables.clone(), terms, self.trunc)
    }
}

impl MultiSeries<Rational> {
    /// Numerical value at a complex point (one value per variable).
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.variables.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: Complex64 = e
                    .iter()
                    .zip(point)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, z)| z.powu(*k))
                    .product();
                mono * rational_to_f64(c)
            })
            .sum()
    }
}

/// Substitutes univariate series for variables of `f`.
///
/// Every variable listed in `subs` is replaced by its series (which must
/// vanish at 0); every other variable is the series variable `X` itself.
/// The result is certified to the smallest truncation order among the
/// substituted series that `f` actually depends on, capped by `f`'s
/// total-degree truncation.
pub fn mv_substitute<C: Coeff>(f: &MultiSeries<C>, subs: &HashMap<String, TruncatedSeries<C>>) -> Result<TruncatedSeries<C>> {
    for (name, s) in subs {
        if !s.coeff(0).is_zero() {
            return Err(Error::NonzeroConstant(format!("substitution for {name} has a nonzero constant term")));
        }
    }
    let mut order: Option<usize> = f.trunc.map(|d| d as usize);
    for (v, name) in f.variables.iter().enumerate() {
        if let Some(s) = subs.get(name) {
            if f.depends_on(v) {
                order = Some(order.map_or(s.order(), |o| o.min(s.order())));
            }
        }
    }
    let order = order.unwrap_or_else(|| f.total_degree() as usize);
    let bases: Vec<Option<&TruncatedSeries<C>>> = f.variables.iter().map(|name| subs.get(name)).collect();
    Ok(substitute_to_order(f, &bases, order))
}

/// Coefficients `0..=order` of `f` with variable `v` replaced by
/// `bases[v]` (`None`: the series variable `X`), treating `f` and the
/// bases as exact polynomials. No certification is attempted.
pub fn substitute_to_order<C: Coeff>(f: &MultiSeries<C>, bases: &[Option<&TruncatedSeries<C>>], order: usize) -> TruncatedSeries<C> {
    let nv = f.variables.len();
    assert_eq!(bases.len(), nv, "one base per variable");
    // cache powers per variable
    let mut powers: Vec<Vec<TruncatedSeries<C>>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let base = match bases[v] {
            Some(s) => {
                if s.order() >= order {
                    s.truncate(order)
                } else {
                    TruncatedSeries::from_poly(s.coeffs(), order)
                }
            }
            None => TruncatedSeries::x(order),
        };
        let maxk = f.degree_in(v) as usize;
        let mut pw = Vec::with_capacity(maxk + 1);
        pw.push(TruncatedSeries::one(order));
        for k in 1..=maxk {
            let next = &pw[k - 1] * &base;
            pw.push(next);
        }
        powers.push(pw);
    }

    let mut out = TruncatedSeries::zero(order);
    for (e, c) in &f.terms {
        let mut term = TruncatedSeries::constant(c.clone(), order);
        for (v, &k) in e.iter().enumerate() {
            if k > 0 {
                term = &term * &powers[v][k as usize];
            }
        }
        out = &out + &term;
    }
    out
}

/// Factors `B_i` with `F(X,Y) - F(X,Z) = Σ B_i (Y_i - Z_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomDecomposition<C> {
    /// Variable list of every factor: the variables of `F` followed by one
    /// `Z` variable per `Y` variable.
    pub variables: Vec<String>,
    /// Indices of the `Y` variables in `variables`.
    pub y_index: Vec<usize>,
    /// Indices of the matching `Z` variables in `variables`.
    pub z_index: Vec<usize>,
    pub factors: Vec<MultiSeries<C>>,
}

impl<C: Coeff> BinomDecomposition<C> {
    /// `B_i(X, Y, Y)`: the factor restricted to the diagonal `Z = Y`.
    pub fn diagonal(&self, i: usize) -> MultiSeries<C> {
        self.z_index
            .iter()
            .zip(&self.y_index)
            .fold(self.factors[i].clone(), |acc, (&z, &y)| acc.identify(z, y))
    }
}

/// Binomial decomposition of `f` with respect to the variables `ys`.
///
/// Peels off one `Y` at a time, last first:
/// `F(Y',Y_n) - F(Y',Z_n)` comes from `Y^k - Z^k = (Y - Z) Σ Y^j Z^{k-1-j}`,
/// and `F(Y',Z_n) - F(Z',Z_n)` is handled recursively with `Z_n` frozen.
/// New `Z` variables are named after their `Y` with a trailing `'`.
pub fn binom_decompose<C: Coeff>(f: &MultiSeries<C>, ys: &[usize]) -> BinomDecomposition<C> {
    let nf = f.variables.len();
    let mut variables = f.variables.clone();
    for &y in ys {
        variables.push(format!("{}'", f.variables[y]));
    }
    let z_index: Vec<usize> = (0..ys.len()).map(|i| nf + i).collect();
    let trunc = f.trunc.map(|d| d.saturating_sub(1));
    let mut current: Vec<(Vec<u32>, C)> = f
        .terms
        .iter()
        .map(|(e, c)| {
            let mut e2 = e.clone();
            e2.resize(variables.len(), 0);
            (e2, c.clone())
        })
        .collect();

    let mut factors: Vec<MultiSeries<C>> = vec![MultiSeries::zero(variables.clone(), trunc); ys.len()];
    for i in (0..ys.len()).rev() {
        let (y, z) = (ys[i], z_index[i]);
        let b = &mut factors[i];
        for (e, c) in &current {
            let k = e[y];
            for j in 0..k {
                let mut e2 = e.clone();
                e2[y] = j;
                e2[z] = k - 1 - j;
                b.add_term(e2, c.clone());
            }
        }
        // freeze Y_i at Z_i for the remaining induction
        for (e, _) in current.iter_mut() {
            e[z] += e[y];
            e[y] = 0;
        }
    }
    BinomDecomposition { variables, y_index: ys.to_vec(), z_index, factors }
}
