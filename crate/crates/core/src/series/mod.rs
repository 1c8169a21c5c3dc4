//! Truncated formal power series over pluggable coefficient domains.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `X^0..=X^N`; everything it says is exact modulo `X^{N+1}`. Binary
//! arithmetic truncates to the smaller of the two orders, composition
//! certifies only what the truncated operands determine.

mod laurent;
mod multi;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use laurent::{laurent_compose_q, LaurentSeries};
pub use multi::{binom_decompose, mv_substitute, substitute_to_order, BinomDecomposition, MultiSeries};

/// Exact rational coefficient domain.
pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Binomial coefficient `C(n, k)` as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Lossy conversion of an exact rational to `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // numerator or denominator beyond f64 range: compare via bit lengths
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Natural log of `|r|`, finite even when `r` is beyond `f64` range.
pub fn ln_abs_rational(r: &Rational) -> f64 {
    let v = rational_to_f64(r).abs();
    if v.is_finite() && v > 0.0 {
        return v.ln();
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rational::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    rational_to_f64(&scaled).abs().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Coefficient domain: a commutative field with a cheap zero test.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embedding of a small integer.
    fn from_i64(n: i64) -> Self;
}

impl Coeff for Rational {
    fn from_i64(n: i64) -> Self {
        int(n)
    }
}

impl Coeff for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Coeff for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

/// Order of a truncated series: the index of its first nonzero
/// coefficient, or the statement that it vanishes up to its truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(usize),
    /// All coefficients up to and including this order are zero.
    ZeroToOrder(usize),
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(n) => Some(n),
            Valuation::ZeroToOrder(_) => None,
        }
    }
}

/// Power series `Σ_{n=0}^{N} a_n X^n`, exact modulo `X^{N+1}`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    /// Polynomial `coeffs` viewed as a series certified to `order`.
    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn from_poly(coeffs: &[C], order: usize) -> Self {
        let mut v: Vec<C> = coeffs.iter().take(order + 1).cloned().collect();
        v.resize(order + 1, C::zero());
        TruncatedSeries { coeffs: v }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// `c·X^k` to the given order (zero if `k > order`).
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity series `X`.
    pub fn x(order: usize) -> Self {
        Self::monomial(C::one(), 1, order)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `X^n`; zero beyond the truncation is *not* implied,
    /// callers must stay within [`order`](Self::order).
    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(n) => Valuation::Finite(n),
            None => Valuation::ZeroToOrder(self.order()),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Formal derivative; the order drops by one (stays 0 for constants).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|n| self.coeffs[n].clone() * C::from_i64(n as i64))
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `X^k · self`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut s = Self::zero(n);
        for i in k..=n {
            s.coeffs[i] = self.coeffs[i - k].clone();
        }
        s
    }

    /// `X^k · self` with the order raised by `k`: the product is exact.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// `(self - self(0) ... - a_{k-1} X^{k-1}) / X^k`: drops the first `k`
    /// coefficients, the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k <= self.order(), "shift beyond truncation");
        TruncatedSeries { coeffs: self.coeffs[k..].to_vec() }
    }

    /// `self(cX)`: coefficients scaled by `c^n`.
    pub fn scale_argument(&self, c: &C) -> Self {
        let mut p = C::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.clone() * p.clone());
            p = p * c.clone();
        }
        TruncatedSeries { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible("constant term is zero".into()));
        }
        let n = self.order();
        let inv0 = C::one() / a0.clone();
        let mut b = vec![C::zero(); n + 1];
        b[0] = inv0.clone();
        for m in 1..=n {
            let mut acc = C::zero();
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    acc = acc + self.coeffs[j].clone() * b[m - j].clone();
                }
            }
            b[m] = -(acc * inv0.clone());
        }
        Ok(TruncatedSeries { coeffs: b })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Composition `self ∘ inner` for `inner(0) = 0`.
    ///
    /// The result is certified to `min(N_self · ord inner, N_inner)`; if
    /// `inner` vanishes to its truncation, only the constant term survives.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant("composition needs P(0) = 0".into()));
        }
        let order = match inner.valuation() {
            Valuation::Finite(nu) => (self.order() * nu).min(inner.order()),
            Valuation::ZeroToOrder(n) => n,
        };
        let inner = inner.truncate(order);
        // Horner: f_N, f_N P + f_{N-1}, ...
        let mut acc = Self::zero(order);
        for a in self.coeffs.iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].clone() + a.clone();
        }
        Ok(acc)
    }

    /// Evaluates the truncated polynomial at `x` (Horner).
    pub fn eval_poly(&self, x: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, a| acc * x.clone() + a.clone())
    }
}

impl TruncatedSeries<Rational> {
    pub fn to_complex(&self) -> TruncatedSeries<Complex64> {
        self.map(|r| Complex64::new(rational_to_f64(r), 0.0))
    }

    /// Largest `|a_n|` as a float, for diagnostics.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| rational_to_f64(&c.abs())).fold(0.0, f64::max)
    }
}

impl TruncatedSeries<Complex64> {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_poly(&z)
    }
}

impl<C: fmt::Debug> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries(N={}, {:?})", self.coeffs.len() - 1, self.coeffs)
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})X")?,
                _ => write!(f, "({c})X^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.order() + 1)
    }
}

impl<C: Coeff> Add for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn add(self, rhs: Self) -> TruncatedSeries<C> {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()).collect();
        TruncatedSeries { coeffs }
    }
}

impl<C: Coeff> Sub for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn sub(self, rhs: Self) -> TruncatedSeries<C> {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone()).collect();
        TruncatedSeries { coeffs }
    }
}

impl<C: Coeff> Mul for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn mul(self, rhs: Self) -> TruncatedSeries<C> {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs }
    }
}

impl<C: Coeff> Neg for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn neg(self) -> TruncatedSeries<C> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

/// Binary operation selector for [`ps_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Add, subtract or multiply two series; exact modulo `X^{min(N_A,N_B)+1}`.
pub fn ps_arith<C: Coeff>(op: ArithOp, a: &TruncatedSeries<C>, b: &TruncatedSeries<C>) -> TruncatedSeries<C> {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}
