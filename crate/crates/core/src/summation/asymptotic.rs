//! Numerical check of Gevrey asymptotic bounds
//! `|f(z) − Σ_{n<m} a_n z^n| ≤ c^m Γ(m/k) |z|^m`.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::laplace::LaplaceValue;
use crate::series::TruncatedSeries;

/// Minimum number of sample points for a meaningful check.
pub const MIN_POINTS: usize = 8;
/// Remainders whose scaled log decreases faster than this slope in
/// `log|z|` do not vanish to the tested order.
const SLOPE_LIMIT: f64 = -0.5;
const ROUNDOFF: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticReport {
    pub passed: bool,
    /// Smallest `c` satisfying every resolved bound.
    pub constant: f64,
    /// First order `m` whose remainder is not `O(|z|^m)`.
    pub failure_order: Option<usize>,
    /// Highest order with enough samples inside `|z| ≤ 1/(2A m^{1/k})`,
    /// `A` the inverse Borel radius estimated from the coefficients.
    pub orders_checked: usize,
    pub points_used: usize,
    pub reason: Option<String>,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Compares sampled values of a sum with the partial sums of `f` for every
/// order `m = 1..=order(f)+1`.
pub fn asymptotic_check(values: &[LaplaceValue], f: &TruncatedSeries<Complex64>, k: u32) -> AsymptoticReport {
    let mut report = AsymptoticReport {
        passed: false,
        constant: 0.0,
        failure_order: None,
        orders_checked: 0,
        points_used: values.len(),
        reason: None,
    };
    if values.len() < MIN_POINTS {
        report.reason = Some(format!("{} sample points, need {MIN_POINTS}", values.len()));
        return report;
    }
    if k == 0 {
        report.reason = Some("level k must be positive".into());
        return report;
    }
    let n_max = f.order() + 1;
    let kf = k as f64;
    // inverse Borel radius; order m is tested where |z| m^{1/k} A ≤ 1/2
    let growth = (1..=f.order())
        .filter(|&n| f.coeff(n).norm() > 0.0)
        .map(|n| ((f.coeff(n).norm().ln() - ln_gamma(1.0 + n as f64 / kf)) / n as f64).exp())
        .fold(0.0, f64::max);
    let mut c = 0.0f64;
    let mut tested = 0;
    for m in 1..=n_max {
        let lg = ln_gamma(m as f64 / kf);
        let window = if growth > 0.0 { 0.5 / (growth * (m as f64).powf(1.0 / kf)) } else { f64::INFINITY };
        let (mut lx, mut ly) = (Vec::new(), Vec::new());
        for v in values {
            let z = v.x;
            if z.norm() > window {
                continue;
            }
            let (mut s, mut mag) = (Complex64::new(0.0, 0.0), 0.0);
            let mut zn = Complex64::new(1.0, 0.0);
            for n in 0..m {
                let t = f.coeff(n) * zn;
                s += t;
                mag += t.norm();
                zn *= z;
            }
            let r = (v.value - s).norm();
            let noise = ROUNDOFF * (v.value.norm() + mag) + v.error;
            if r <= noise {
                continue;
            }
            let lz = z.norm().ln();
            let scaled = r.ln() - m as f64 * lz;
            lx.push(lz);
            ly.push(scaled);
            c = c.max(((scaled - lg) / m as f64).exp());
        }
        let distinct = {
            let mut s = lx.clone();
            s.sort_by(f64::total_cmp);
            s.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            s.len()
        };
        if distinct < 3 {
            continue;
        }
        tested = m;
        report.orders_checked = m;
        if slope(&lx, &ly) < SLOPE_LIMIT {
            report.failure_order = Some(m);
            report.constant = c;
            report.reason = Some(format!("remainder of order {m} is not O(|z|^{m})"));
            return report;
        }
    }
    report.passed = tested > 0;
    if tested == 0 {
        report.reason = Some("no order has three sample points inside its asymptotic window".into());
    }
    report.constant = c;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summation::{log_moduli, BorelContinuation, Direction, QuadratureConfig};

    fn geometric(perturb: f64) -> (Vec<LaplaceValue>, TruncatedSeries<Complex64>) {
        let f = TruncatedSeries::new(vec![Complex64::new(1.0, 0.0); 20]);
        let vals = log_moduli(0.02, 0.2, 10)
            .into_iter()
            .map(|r| {
                let x = Complex64::new(r, 0.0);
                LaplaceValue { x, value: 1.0 / (1.0 - x) + perturb, error: 0.0 }
            })
            .collect();
        (vals, f)
    }

    #[test]
    fn geometric_passes() {
        let (v, f) = geometric(0.0);
        let r = asymptotic_check(&v, &f, 1);
        assert!(r.passed, "{r:?}");
        assert!(r.constant < 2.0);
    }

    #[test]
    fn perturbation_fails_at_first_order() {
        let (v, f) = geometric(0.1);
        let r = asymptotic_check(&v, &f, 1);
        assert!(!r.passed);
        assert_eq!(r.failure_order, Some(1));
    }

    #[test]
    fn euler_sum_is_gevrey_one() {
        // Σ n! x^n summed along 0.4 with Borel image 1/(1−t)
        let cfg = QuadratureConfig::default();
        let b = TruncatedSeries::new(vec![Complex64::new(1.0, 0.0); 40]);
        let f = TruncatedSeries::new((0..16).map(|n| Complex64::new((1..=n).product::<u64>() as f64, 0.0)).collect());
        let cont = BorelContinuation::new(&b, 1, &cfg).unwrap();
        let vals: Vec<_> = log_moduli(0.03, 0.12, 10)
            .into_iter()
            .map(|r| cont.sum_along(Direction::new(0.4).theta(), Complex64::new(r, 0.0), &cfg).unwrap())
            .collect();
        let r = asymptotic_check(&vals, &f, 1);
        assert!(r.passed, "{r:?}");
        assert!(r.constant > 0.1 && r.constant < 10.0, "{r:?}");
    }

    #[test]
    fn too_few_points() {
        let (v, f) = geometric(0.0);
        assert!(!asymptotic_check(&v[..3], &f, 1).passed);
    }
}
