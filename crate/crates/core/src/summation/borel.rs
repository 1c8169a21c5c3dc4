//! Level-`k` Borel transform `Σ a_n X^n ↦ Σ a_n t^n / Γ(1 + n/k)`.

use num_complex::Complex64;
use num_traits::Zero;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::series::{ln_abs_rational, rational_to_f64, Rational, TruncatedSeries};

fn check_level(k: u32) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidInput("Borel level k must be at least 1".into()));
    }
    Ok(())
}

/// Borel transform of a floating-point series.
pub fn borel_transform(f: &TruncatedSeries<Complex64>, k: u32) -> Result<TruncatedSeries<Complex64>> {
    check_level(k)?;
    let k = k as usize;
    let mut fact = 1.0;
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| {
            // integer arguments use the exact running factorial
            if n > 0 && n % k == 0 {
                fact *= (n / k) as f64;
            }
            if n == 0 || a.is_zero() {
                *a
            } else if n % k == 0 {
                a / fact
            } else {
                a * (-ln_gamma(1.0 + n as f64 / k as f64)).exp()
            }
        })
        .collect();
    Ok(TruncatedSeries::new(coeffs))
}

/// Borel transform of an exact series. At `k = 1` the division by `n!` is
/// exact; otherwise magnitudes are combined in log space so coefficients
/// far beyond `f64` range still produce finite results.
pub fn borel_transform_exact(f: &TruncatedSeries<Rational>, k: u32) -> Result<TruncatedSeries<Complex64>> {
    check_level(k)?;
    let mut fact = Rational::from_integer(1.into());
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| {
            if n > 0 {
                fact *= Rational::from_integer(n.into());
            }
            if a.is_zero() {
                return Complex64::zero();
            }
            let v = if k == 1 {
                rational_to_f64(&(a / &fact))
            } else {
                let sign = if a < &Rational::zero() { -1.0 } else { 1.0 };
                sign * (ln_abs_rational(a) - ln_gamma(1.0 + n as f64 / k as f64)).exp()
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    Ok(TruncatedSeries::new(coeffs))
}
