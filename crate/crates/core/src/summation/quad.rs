//! Globally adaptive Gauss–Kronrod (10/21) quadrature of complex-valued
//! integrands on a real interval.

use std::env;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

/// Environment variable selecting the default profile.
pub const PROFILE_ENV: &str = "STOKES_QUADRATURE";

/// Parameters of the Laplace integration.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub max_subdivisions: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of Borel coefficients fed to the Padé approximant.
    pub pade_order: usize,
    /// The ray is cut where `Re (t/x)^k` reaches this value.
    pub cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { max_subdivisions: 400, abs_tol: 1e-15, rel_tol: 1e-12, pade_order: 80, cutoff: 50.0 }
    }
}

impl QuadratureConfig {
    /// Named profiles: `fast`, `default`, `precise`.
    pub fn profile(name: &str) -> Option<Self> {
        match name {
            "fast" => Some(QuadratureConfig { max_subdivisions: 100, abs_tol: 1e-12, rel_tol: 1e-8, pade_order: 50, cutoff: 40.0 }),
            "default" => Some(Self::default()),
            "precise" => Some(QuadratureConfig { max_subdivisions: 1000, abs_tol: 1e-16, rel_tol: 1e-13, pade_order: 100, cutoff: 60.0 }),
            _ => None,
        }
    }

    /// Profile named by [`PROFILE_ENV`], falling back to the default.
    pub fn from_env() -> Self {
        env::var(PROFILE_ENV).ok().and_then(|p| Self::profile(p.trim())).unwrap_or_default()
    }
}

/// Bisections that fail to reduce the error before the integrand is
/// treated as noisy.
const STALL_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub subdivisions: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    uncertainty: f64,
}

/// One 21-point Kronrod step. The integrand returns its value and a
/// nonnegative uncertainty density, whose integral is added to the error.
fn gk21<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<(Complex64, f64)>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (fc, uc) = f(center)?;
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut unc = uc * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, u1) = f(center - dx)?;
        let (f2, u2) = f(center + dx)?;
        kron += (f1 + f2) * WGK[j];
        unc += (u1 + u2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).norm() + 50.0 * f64::EPSILON * value.norm();
    Ok(Segment { a, b, value, error, uncertainty: unc * half.abs() })
}

/// `∫_a^b f`, bisecting the worst segment until the summed quadrature
/// error meets `max(abs_tol, rel_tol·|I|)` or the roundoff level of the
/// segment sum. Repeated bisections that fail to shrink the error signal
/// noise in the integrand; the current estimate is then returned with its
/// error. The reported error also includes the integrated uncertainty
/// density.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<(Complex64, f64)>,
{
    let mut segs = vec![gk21(&f, a, b)?];
    let mut stalled = 0;
    loop {
        let value: Complex64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let roundoff: f64 = segs.iter().map(|s| 100.0 * f64::EPSILON * s.value.norm()).sum();
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.norm()).max(roundoff) || stalled >= STALL_LIMIT {
            let uncertainty: f64 = segs.iter().map(|s| s.uncertainty).sum();
            return Ok(QuadResult { value, error: error + uncertainty, subdivisions: segs.len() });
        }
        if segs.len() >= cfg.max_subdivisions {
            return Err(Error::Quadrature { error, subdivisions: segs.len() });
        }
        let worst = (0..segs.len()).max_by(|&i, &j| segs[i].error.total_cmp(&segs[j].error)).unwrap_or(0);
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Quadrature { error, subdivisions: segs.len() + 1 });
        }
        let left = gk21(&f, s.a, mid)?;
        let right = gk21(&f, mid, s.b)?;
        if left.error + right.error >= 0.99 * s.error {
            stalled += 1;
        }
        segs.push(left);
        segs.push(right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_moment() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|s| Ok((Complex64::new(s * s * (-s).exp(), 0.0), 0.0)), 0.0, 60.0, &cfg).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn oscillatory_complex() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|s| Ok((Complex64::new(0.0, 10.0 * s).exp(), 0.0)), 0.0, 1.0, &cfg).unwrap();
        let exact = (Complex64::new(0.0, 10.0).exp() - 1.0) / Complex64::new(0.0, 10.0);
        assert!((r.value - exact).norm() < 1e-13);
    }

    #[test]
    fn uncertainty_is_reported() {
        let cfg = QuadratureConfig { abs_tol: 1.0, ..Default::default() };
        let r = integrate(|_| Ok((Complex64::new(1.0, 0.0), 0.25)), 0.0, 2.0, &cfg).unwrap();
        assert!((r.error - 0.5).abs() < 1e-12);
    }

    #[test]
    fn noisy_integrand_stops_with_error() {
        let cfg = QuadratureConfig { rel_tol: 1e-15, abs_tol: 0.0, ..Default::default() };
        let noise = |s: f64| 1e-9 * ((s * 1e7).sin());
        let r = integrate(|s| Ok((Complex64::new(1.0 + noise(s), 0.0), 0.0)), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-8);
        assert!(r.error > 1e-15);
        assert!(r.subdivisions < cfg.max_subdivisions);
    }

    #[test]
    fn profiles() {
        assert!(QuadratureConfig::profile("fast").unwrap().rel_tol > QuadratureConfig::default().rel_tol);
        assert!(QuadratureConfig::profile("nope").is_none());
    }
}
