//! Level-`k` Laplace integrals of Padé-continued Borel transforms.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::pade::{PadeApproximant, DEFAULT_PADE_TOL};
use super::quad::{integrate, QuadratureConfig};
use super::Direction;
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Degree drop of the comparison approximant, counted from the primary's
/// degrees after reduction so that the two genuinely differ.
const CHECK_DROP: usize = 2;

/// A sum value at one point with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceValue {
    pub x: Complex64,
    pub value: Complex64,
    pub error: f64,
}

/// Analytic continuation of a level-`k` Borel transform.
#[derive(Clone, Debug)]
pub struct BorelContinuation {
    k: u32,
    primary: PadeApproximant,
    check: Option<PadeApproximant>,
}

fn wrap(a: f64) -> f64 {
    let t = (a + PI).rem_euclid(2.0 * PI) - PI;
    if t <= -PI {
        t + 2.0 * PI
    } else {
        t
    }
}

impl BorelContinuation {
    /// Uses the first `cfg.pade_order` coefficients of `borel`.
    pub fn new(borel: &TruncatedSeries<Complex64>, k: u32, cfg: &QuadratureConfig) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidInput("Laplace level k must be at least 1".into()));
        }
        let n = borel.order().min(cfg.pade_order.saturating_sub(1).max(1));
        let b = borel.truncate(n);
        let primary = PadeApproximant::diagonal(&b)?;
        let (m, d) = primary.degrees();
        let check = if d > CHECK_DROP && m >= CHECK_DROP {
            PadeApproximant::robust(b.coeffs(), m - CHECK_DROP, d - CHECK_DROP, DEFAULT_PADE_TOL).ok()
        } else {
            None
        };
        Ok(BorelContinuation { k, primary, check })
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn approximant(&self) -> &PadeApproximant {
        &self.primary
    }

    /// Continued value and a continuation-error estimate.
    pub fn eval(&self, t: Complex64) -> Result<(Complex64, f64)> {
        let v = self.primary.evaluate(t)?;
        let unc = match &self.check {
            Some(c) => {
                let d = (c.eval(t) - v).norm();
                if d.is_finite() {
                    d
                } else {
                    0.0
                }
            }
            None => 0.0,
        };
        Ok((v, unc))
    }

    /// `k ∫_0^{∞e^{iψ}} B(t) e^{−(t/x)^k} t^{k−1} x^{−k} dt`, cut where the
    /// exponent reaches `cfg.cutoff`.
    pub fn sum_along(&self, psi: f64, x: Complex64, cfg: &QuadratureConfig) -> Result<LaplaceValue> {
        let k = self.k as f64;
        if x.norm() == 0.0 {
            return Err(Error::InvalidInput("Laplace sum at x = 0".into()));
        }
        let c = (k * wrap(psi - x.arg())).cos();
        if c < 1e-6 {
            return Err(Error::Direction(format!("ray {psi} does not converge at x = {x} for level {}", self.k)));
        }
        let r = x.norm() * (cfg.cutoff / c).powf(1.0 / k);
        let e = Complex64::from_polar(1.0, psi);
        for p in self.primary.poles() {
            let rel = p * e.conj();
            let dist = if rel.re > 0.0 { rel.im.abs() } else { p.norm() };
            if rel.re <= r && dist < 1e-6 * (1.0 + p.norm()) {
                return Err(Error::NearPole { point: format!("Padé pole {p} of the Borel transform lies on the integration ray {psi}"), distance: dist });
            }
        }
        let ki = self.k as i32;
        let xk = x.powi(ki);
        let integrand = |s: f64| -> Result<(Complex64, f64)> {
            let t = e * s;
            let (b, unc) = self.eval(t)?;
            let kern = (-(t.powi(ki) / xk)).exp() * k * t.powi(ki - 1) / xk * e;
            Ok((b * kern, unc * kern.norm()))
        };
        let q = integrate(integrand, 0.0, r, cfg)?;
        Ok(LaplaceValue { x, value: q.value, error: q.error })
    }
}

/// Laplace sums of the Borel transform `borel` in direction `theta` at
/// every point of `xs`.
pub fn laplace_sum(
    borel: &TruncatedSeries<Complex64>,
    k: u32,
    theta: Direction,
    xs: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<Vec<LaplaceValue>> {
    let cont = BorelContinuation::new(borel, k, cfg)?;
    xs.iter().map(|&x| cont.sum_along(theta.theta(), x, cfg)).collect()
}
