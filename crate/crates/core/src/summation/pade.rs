//! Robust Padé approximants (SVD-based, degree-reducing) for continuing
//! Borel transforms beyond their disk of convergence.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Relative singular-value threshold for the degree reduction.
pub const DEFAULT_PADE_TOL: f64 = 1e-14;
/// Evaluation closer than this (relative to `1 + |pole|`) to a pole fails.
pub const DEFAULT_POLE_TOL: f64 = 1e-8;

/// Rational function `a(t)/b(t)` with `b(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    poles: Vec<Complex64>,
    pole_tol: f64,
}

fn horner(c: &[Complex64], t: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a)
}

fn norm2(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Roots of `Σ c_k z^k` by Aberth–Ehrlich iteration.
pub fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = c.to_vec();
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    let r0 = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let p = horner(&monic, z[i]);
            let dp = horner(&deriv, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

impl PadeApproximant {
    /// Type `(m, n)` approximant of the coefficients `c_0..c_{m+n}` with
    /// automatic degree reduction: singular values of the Toeplitz block
    /// below `tol·‖c‖` are treated as zero, which removes spurious
    /// pole-zero pairs.
    pub fn robust(coeffs: &[Complex64], m: usize, n: usize, tol: f64) -> Result<Self> {
        let (mut m, mut n) = (m, n);
        let mut c: Vec<Complex64> = coeffs.iter().take(m + n + 1).copied().collect();
        c.resize(m + n + 1, Complex64::new(0.0, 0.0));
        let ts = tol * norm2(&c);
        let zero = Complex64::new(0.0, 0.0);
        if norm2(&c[..=m]) <= ts {
            return Ok(PadeApproximant { num: vec![zero], den: vec![Complex64::new(1.0, 0.0)], poles: Vec::new(), pole_tol: DEFAULT_POLE_TOL });
        }
        let toeplitz = |rows: std::ops::Range<usize>, n: usize| {
            DMatrix::from_fn(rows.len(), n + 1, |i, j| {
                let r = rows.start + i;
                if r >= j {
                    c[r - j]
                } else {
                    zero
                }
            })
        };
        let mut b: Vec<Complex64>;
        loop {
            if n == 0 {
                b = vec![Complex64::new(1.0, 0.0)];
                break;
            }
            let cm = toeplitz(m + 1..m + n + 1, n);
            let sv = cm.clone().svd(false, false).singular_values;
            let rho = sv.iter().filter(|&&s| s > ts).count();
            if rho == n {
                // square up with a zero row so the SVD carries the null vector
                let mut sq = DMatrix::from_element(n + 1, n + 1, zero);
                sq.view_mut((0, 0), (n, n + 1)).copy_from(&cm);
                let svd = sq.svd(false, true);
                let vt = svd.v_t.ok_or_else(|| Error::NotInvertible("SVD failed".into()))?;
                let imin = (0..=n).min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j])).unwrap_or(n);
                b = (0..=n).map(|j| vt[(imin, j)].conj()).collect();
                break;
            }
            m = m.saturating_sub(n - rho);
            n = rho;
        }
        let bm = DMatrix::from_column_slice(b.len(), 1, &b);
        let zt = toeplitz(0..m + 1, n);
        let am = zt * bm;
        let mut a: Vec<Complex64> = am.iter().copied().collect();

        // cancel common powers of t, then trailing negligible coefficients
        let lam = b.iter().position(|z| z.norm() > tol).unwrap_or(0);
        b.drain(..lam);
        a.drain(..lam.min(a.len()));
        if a.is_empty() {
            a.push(zero);
        }
        while a.len() > 1 && a.last().is_some_and(|z| z.norm() <= ts) {
            a.pop();
        }
        while b.len() > 1 && b.last().is_some_and(|z| z.norm() <= tol) {
            b.pop();
        }
        let b0 = b[0];
        let num: Vec<Complex64> = a.iter().map(|z| z / b0).collect();
        let den: Vec<Complex64> = b.iter().map(|z| z / b0).collect();
        let poles = polynomial_roots(&den);
        Ok(PadeApproximant { num, den, poles, pole_tol: DEFAULT_POLE_TOL })
    }

    /// Diagonal approximant from all coefficients of `series`.
    pub fn diagonal(series: &TruncatedSeries<Complex64>) -> Result<Self> {
        let n = series.order();
        if n + 1 < 10 {
            return Err(Error::TooFewCoefficients { needed: 10, available: n + 1 });
        }
        Self::robust(series.coeffs(), n - n / 2, n / 2, DEFAULT_PADE_TOL)
    }

    pub fn with_pole_tol(mut self, tol: f64) -> Self {
        self.pole_tol = tol;
        self
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// Degrees `(deg a, deg b)` after reduction.
    pub fn degrees(&self) -> (usize, usize) {
        (self.num.len() - 1, self.den.len() - 1)
    }

    /// Value without pole diagnostics.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        horner(&self.num, t) / horner(&self.den, t)
    }

    /// Distance from `t` to the nearest pole.
    pub fn pole_distance(&self, t: Complex64) -> f64 {
        self.poles.iter().map(|p| (t - p).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Value at `t`, failing within the pole tolerance of a pole.
    pub fn evaluate(&self, t: Complex64) -> Result<Complex64> {
        for p in &self.poles {
            let d = (t - p).norm();
            if d < self.pole_tol * (1.0 + p.norm()) {
                return Err(Error::NearPole { point: format!("evaluation point {t} is at a Padé pole"), distance: d });
            }
        }
        Ok(self.eval(t))
    }
}

/// Analytic continuation of a Borel transform by its diagonal robust
/// Padé approximant.
pub fn continue_evaluate(b: &TruncatedSeries<Complex64>, t: Complex64) -> Result<Complex64> {
    PadeApproximant::diagonal(b)?.evaluate(t)
}
