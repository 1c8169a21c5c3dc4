//! Exact rational polynomials and 2×2 (polynomial) matrices.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::series::{int, Rational, TruncatedSeries, Valuation};

/// Polynomial with rational coefficients, `coeffs[k]` multiplying `x^k`.
/// Trailing zeros are trimmed, the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Poly::new(v.iter().map(|&n| int(n)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Lowest nonzero coefficient (the sign of `P` near `0⁺`).
    pub fn lowest_coeff(&self) -> Option<&Rational> {
        self.order().map(|k| &self.coeffs[k])
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x^k · self`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    /// `self / x^k`, dropping the low coefficients (callers check they vanish).
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::series::rational_to_f64(c))
    }

    /// As a truncated series of the given order.
    pub fn to_series(&self, order: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::from_poly(&self.coeffs, order)
    }

    /// Polynomial part of a series (all its coefficients).
    pub fn from_series(s: &TruncatedSeries<Rational>) -> Poly {
        Poly::new(s.coeffs().to_vec())
    }

    pub fn valuation(&self) -> Valuation {
        match self.order() {
            Some(k) => Valuation::Finite(k),
            None => Valuation::ZeroToOrder(0),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·x")?,
                _ => write!(f, "{c}·x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Rational 2×2 matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2(pub [[Rational; 2]; 2]);

impl Mat2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(int(a), int(b), int(c), int(d))
    }

    pub fn zero() -> Self {
        Mat2::from_ints(0, 0, 0, 0)
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    /// The rotation generator `J = (0, -1; 1, 0)`.
    pub fn rotation() -> Self {
        Mat2::from_ints(0, -1, 1, 0)
    }

    /// `(a, -b; b, a) = aI + bJ`.
    pub fn rotation_dilation(a: Rational, b: Rational) -> Self {
        Mat2::new(a.clone(), -b.clone(), b, a)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_zero())
    }

    /// Whether the matrix has the shape `(a, -b; b, a)`.
    pub fn is_rotation_dilation(&self) -> bool {
        self.0[0][0] == self.0[1][1] && self.0[0][1] == -self.0[1][0].clone()
    }

    /// `(a, b)` with `self = aI + bJ`, if it has that shape.
    pub fn rotation_dilation_parts(&self) -> Option<(Rational, Rational)> {
        self.is_rotation_dilation().then(|| (self.0[0][0].clone(), self.0[1][0].clone()))
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] + &rhs.0[i][j])))
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] - &rhs.0[i][j])))
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| {
            std::array::from_fn(|j| &self.0[i][0] * &rhs.0[0][j] + &self.0[i][1] * &rhs.0[1][j])
        }))
    }

    pub fn scale(&self, c: &Rational) -> Mat2 {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] * c)))
    }

    pub fn apply(&self, v: &[Rational; 2]) -> [Rational; 2] {
        std::array::from_fn(|i| &self.0[i][0] * &v[0] + &self.0[i][1] * &v[1])
    }

    pub fn trace(&self) -> Rational {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn det(&self) -> Rational {
        &self.0[0][0] * &self.0[1][1] - &self.0[0][1] * &self.0[1][0]
    }

    /// Discriminant `tr² − 4 det` of the characteristic polynomial.
    pub fn discriminant(&self) -> Rational {
        let t = self.trace();
        &t * &t - self.det() * int(4)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let inv = Rational::one() / d;
        Some(Mat2::new(
            &self.0[1][1] * &inv,
            -(&self.0[0][1] * &inv),
            -(&self.0[1][0] * &inv),
            &self.0[0][0] * &inv,
        ))
    }

    /// Whether some eigenvalue is nonzero (i.e. not nilpotent).
    pub fn has_nonzero_eigenvalue(&self) -> bool {
        !(self.trace().is_zero() && self.det().is_zero())
    }

    /// Rational entries as floats.
    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| crate::series::rational_to_f64(&self.0[i][j])))
    }

    pub fn max_abs(&self) -> Rational {
        self.0.iter().flatten().map(|c| c.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }
}

/// Polynomial matrix `Σ_k M_k x^k`; trailing zero matrices are trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PolyMat2 {
    coeffs: Vec<Mat2>,
}

impl PolyMat2 {
    pub fn new(mut coeffs: Vec<Mat2>) -> Self {
        while coeffs.last().is_some_and(|m| m.is_zero()) {
            coeffs.pop();
        }
        PolyMat2 { coeffs }
    }

    pub fn zero() -> Self {
        PolyMat2 { coeffs: Vec::new() }
    }

    pub fn constant(m: Mat2) -> Self {
        PolyMat2::new(vec![m])
    }

    /// `p(x)·I`.
    pub fn scalar(p: &Poly) -> Self {
        PolyMat2::new(p.coeffs().iter().map(|c| Mat2::identity().scale(c)).collect())
    }

    /// `p(x)·M`.
    pub fn scalar_times(p: &Poly, m: &Mat2) -> Self {
        PolyMat2::new(p.coeffs().iter().map(|c| m.scale(c)).collect())
    }

    /// Matrix of polynomial entries.
    pub fn from_entries(e: &[[Poly; 2]; 2]) -> Self {
        let n = e.iter().flatten().map(|p| p.coeffs().len()).max().unwrap_or(0);
        PolyMat2::new(
            (0..n)
                .map(|k| Mat2(std::array::from_fn(|i| std::array::from_fn(|j| e[i][j].coeff(k)))))
                .collect(),
        )
    }

    pub fn entries(&self) -> [[Poly; 2]; 2] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| Poly::new(self.coeffs.iter().map(|m| m.0[i][j].clone()).collect()))
        })
    }

    pub fn coeffs(&self) -> &[Mat2] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Mat2 {
        self.coeffs.get(k).cloned().unwrap_or_else(Mat2::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, rhs: &PolyMat2) -> PolyMat2 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyMat2::new((0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect())
    }

    pub fn sub(&self, rhs: &PolyMat2) -> PolyMat2 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyMat2::new((0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect())
    }

    pub fn mul(&self, rhs: &PolyMat2) -> PolyMat2 {
        if self.is_zero() || rhs.is_zero() {
            return PolyMat2::zero();
        }
        let mut v = vec![Mat2::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        PolyMat2::new(v)
    }

    pub fn shift_up(&self, k: usize) -> PolyMat2 {
        if self.is_zero() {
            return PolyMat2::zero();
        }
        let mut v = vec![Mat2::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        PolyMat2::new(v)
    }

    pub fn shift_down(&self, k: usize) -> PolyMat2 {
        PolyMat2::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> PolyMat2 {
        PolyMat2::new(self.coeffs.iter().enumerate().skip(1).map(|(k, m)| m.scale(&int(k as i64))).collect())
    }

    pub fn trace(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|m| m.trace()).collect())
    }

    /// Applies the matrix to a pair of series: `(M(X) v(X))_i`.
    pub fn apply_series(&self, v: &[TruncatedSeries<Rational>; 2]) -> [TruncatedSeries<Rational>; 2] {
        let order = v[0].order().min(v[1].order());
        let e = self.entries();
        std::array::from_fn(|i| {
            let a = &e[i][0].to_series(order) * &v[0];
            let b = &e[i][1].to_series(order) * &v[1];
            &a + &b
        })
    }

    /// Inverse as a matrix of truncated series, valid when `M(0)` is
    /// invertible: `M^{-1} = adj(M) / det(M)`.
    pub fn inverse_series(&self, order: usize) -> Option<[[TruncatedSeries<Rational>; 2]; 2]> {
        let e = self.entries();
        let det = e[0][0].mul(&e[1][1]).sub(&e[0][1].mul(&e[1][0]));
        let inv_det = det.to_series(order).inverse().ok()?;
        let adj = [
            [e[1][1].clone(), e[0][1].scale(&-Rational::one())],
            [e[1][0].scale(&-Rational::one()), e[0][0].clone()],
        ];
        Some(std::array::from_fn(|i| std::array::from_fn(|j| &adj[i][j].to_series(order) * &inv_det)))
    }
}
