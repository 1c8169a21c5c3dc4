//! Lateral sums around singular directions, Stokes differences and the
//! leading-order Stokes model.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::borel::borel_transform_exact;
use super::direction::{roots_of_unity, Direction, SingularSet};
use super::laplace::{BorelContinuation, LaplaceValue};
use super::quad::QuadratureConfig;
use crate::error::{Error, Result};
use crate::odeforms::FormalSolution;
use crate::odeforms::{InterlacedSpec, SystemSpec};
use crate::series::rational_to_f64;

/// Fit samples whose modulus is below this multiple of their error
/// estimate are discarded.
const NOISE_FACTOR: f64 = 10.0;

/// Singular directions `{2pπ/q}` of an interlaced final form with `r ≥ 1`.
pub fn singular_directions(spec: &InterlacedSpec) -> SingularSet {
    roots_of_unity(spec.q)
}

/// Angle between the singular direction `theta` and the rays used for the
/// lateral sums, for level `k` and sample ray `phi`.
pub fn lateral_offset(theta: Direction, phi: f64, k: u32, s: &SingularSet) -> Result<f64> {
    let half = PI / (2.0 * k as f64);
    let off = Direction::new(phi).signed_offset(theta).abs();
    if off >= half {
        return Err(Error::Direction(format!("ray {phi} is outside V({}, {k})", theta.theta())));
    }
    let mut delta = PI / (8.0 * k as f64);
    if let Some(gap) = s.gap_from(theta) {
        delta = delta.min(gap / 2.0);
    }
    Ok(delta.min(0.75 * (half - off)))
}

/// Values of the two lateral sums at one point and their difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LateralPair {
    pub x: Complex64,
    pub upper: LaplaceValue,
    pub lower: LaplaceValue,
}

impl LateralPair {
    pub fn difference(&self) -> LaplaceValue {
        LaplaceValue { x: self.x, value: self.upper.value - self.lower.value, error: self.upper.error + self.lower.error }
    }
}

/// Sums along `theta + delta` and `theta − delta` at every point.
pub fn lateral_pairs(
    cont: &BorelContinuation,
    theta: Direction,
    delta: f64,
    points: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<Vec<LateralPair>> {
    let th = theta.theta();
    points
        .iter()
        .map(|&x| {
            Ok(LateralPair { x, upper: cont.sum_along(th + delta, x, cfg)?, lower: cont.sum_along(th - delta, x, cfg)? })
        })
        .collect()
}

/// Points `ρ e^{iφ}` for the given moduli.
pub fn ray_points(phi: f64, moduli: &[f64]) -> Vec<Complex64> {
    moduli.iter().map(|&r| Complex64::from_polar(r, phi)).collect()
}

/// `m` log-spaced moduli from `xmax` down to `xmin`.
pub fn log_moduli(xmin: f64, xmax: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![xmax];
    }
    let (l0, l1) = (xmax.ln(), xmin.ln());
    (0..m).map(|i| (l0 + (l1 - l0) * i as f64 / (m - 1) as f64).exp()).collect()
}

/// Componentwise Borel continuations of a formal solution at level `q`.
pub fn solution_continuations(h: &FormalSolution, cfg: &QuadratureConfig) -> Result<[BorelContinuation; 2]> {
    let k = h.q;
    let n = h.certified_order;
    let mk = |j: usize| -> Result<BorelContinuation> {
        let b = borel_transform_exact(&h.h[j].truncate(n), k)?;
        BorelContinuation::new(&b, k, cfg)
    };
    Ok([mk(0)?, mk(1)?])
}

/// Lateral sums of both components of `h` along direction `psi`.
pub fn lateral_sums(h: &FormalSolution, psi: f64, points: &[Complex64], cfg: &QuadratureConfig) -> Result<Vec<[LaplaceValue; 2]>> {
    let [c1, c2] = solution_continuations(h, cfg)?;
    points.iter().map(|&x| Ok([c1.sum_along(psi, x, cfg)?, c2.sum_along(psi, x, cfg)?])).collect()
}

/// Sampled Stokes differences `Δ_θ H` along the ray of angle `phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesSample {
    pub theta: Direction,
    pub phi: f64,
    pub k: u32,
    pub offset: f64,
    pub moduli: Vec<f64>,
    pub points: Vec<Complex64>,
    pub values: Vec<[Complex64; 2]>,
    pub errors: Vec<[f64; 2]>,
}

impl StokesSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Δ_θ H` at `ρ e^{iφ}` for each modulus, with the default offset.
pub fn stokes_difference(h: &FormalSolution, theta: Direction, phi: f64, moduli: &[f64], cfg: &QuadratureConfig) -> Result<StokesSample> {
    let s = roots_of_unity(h.q);
    let delta = lateral_offset(theta, phi, h.q, &s)?;
    stokes_difference_with_offset(h, theta, phi, moduli, delta, cfg)
}

/// As [`stokes_difference`] with an explicit offset.
pub fn stokes_difference_with_offset(
    h: &FormalSolution,
    theta: Direction,
    phi: f64,
    moduli: &[f64],
    delta: f64,
    cfg: &QuadratureConfig,
) -> Result<StokesSample> {
    let s = roots_of_unity(h.q);
    if !s.contains(theta) {
        return Err(Error::Direction(format!("{} is not a singular direction", theta.theta())));
    }
    if moduli.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidInput("sample moduli must be positive".into()));
    }
    let half = PI / (2.0 * h.q as f64);
    if Direction::new(phi).signed_offset(theta).abs() >= half {
        return Err(Error::Direction(format!("ray {phi} is outside V({}, {})", theta.theta(), h.q)));
    }
    let points = ray_points(phi, moduli);
    let conts = solution_continuations(h, cfg)?;
    let mut values = Vec::with_capacity(points.len());
    let mut errors = Vec::with_capacity(points.len());
    for &x in &points {
        let mut v = [Complex64::new(0.0, 0.0); 2];
        let mut e = [0.0; 2];
        for j in 0..2 {
            if h.h[j].is_zero() {
                continue;
            }
            let up = conts[j].sum_along(theta.theta() + delta, x, cfg)?;
            let lo = conts[j].sum_along(theta.theta() - delta, x, cfg)?;
            v[j] = up.value - lo.value;
            e[j] = up.error + lo.error;
        }
        values.push(v);
        errors.push(e);
    }
    Ok(StokesSample { theta, phi, k: h.q, offset: delta, moduli: moduli.to_vec(), points, values, errors })
}

/// Parameters of `ΔH = e^{Q_a} x^{a_q} C μ E` with `C = (1, 1; −i, i)` and
/// `E = (e^{iQ_b} x^{iω}, e^{−iQ_b} x^{−iω})`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesParameters {
    /// Coefficients of `x^{m−q}` in `Q_a`, `m = 0..q−1`.
    pub q_a: Vec<f64>,
    pub power_exponent: f64,
    /// Coefficients of `x^{m−(q−r)}` in `Q_b`, `m = 0..q−r−1`.
    pub q_b: Vec<f64>,
    pub osc_freq: f64,
    /// Multiplicative constants of the two exponential modes.
    pub constants: [Complex64; 2],
}

impl StokesParameters {
    /// Leading rate `−[x^{−q}] Q_a`.
    pub fn exp_rate(&self) -> f64 {
        -self.q_a.first().copied().unwrap_or(0.0)
    }

    /// Model value at `ρ e^{iφ}` on the branch `log x = ln ρ + iφ`.
    pub fn evaluate(&self, rho: f64, phi: f64) -> [Complex64; 2] {
        let [u1, u2] = self.modes(rho, phi);
        let i = Complex64::i();
        [u1 + u2, -i * u1 + i * u2]
    }

    fn modes(&self, rho: f64, phi: f64) -> [Complex64; 2] {
        let lx = Complex64::new(rho.ln(), phi);
        let q = self.q_a.len() as i32;
        let qb = self.q_b.len() as i32;
        let xp = |e: i32| (lx * e as f64).exp();
        let qa: Complex64 = self.q_a.iter().enumerate().map(|(m, a)| a * xp(m as i32 - q)).sum();
        let qbv: Complex64 = self.q_b.iter().enumerate().map(|(m, b)| b * xp(m as i32 - qb)).sum();
        let i = Complex64::i();
        let common = qa + self.power_exponent * lx;
        let osc = i * (qbv + self.osc_freq * lx);
        [self.constants[0] * (common + osc).exp(), self.constants[1] * (common - osc).exp()]
    }
}

/// Model parameters predicted by the system coefficients.
pub fn predicted_parameters(spec: &InterlacedSpec) -> StokesParameters {
    let (q, r) = (spec.q as usize, spec.r as usize);
    let a = |m: usize| rational_to_f64(&spec.a.coeff(m));
    let b = |m: usize| rational_to_f64(&spec.b.coeff(m));
    StokesParameters {
        q_a: (0..q).map(|m| -a(m) / (q - m) as f64).collect(),
        power_exponent: a(q),
        q_b: (0..q - r).map(|m| -b(m) / (q - r - m) as f64).collect(),
        osc_freq: b(q - r),
        constants: [Complex64::new(0.0, 0.0); 2],
    }
}

/// Result of fitting a [`StokesSample`] to the Stokes model.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesModel {
    pub fitted: StokesParameters,
    pub predicted: StokesParameters,
    pub exp_rate: f64,
    pub power_exponent: f64,
    pub osc_freq: f64,
    /// Root-mean-square residual of the log-linear fit.
    pub residual_rms: f64,
    /// Largest relative deviation between the fitted model and the data.
    pub max_relative_residual: f64,
    /// Samples retained per exponential mode.
    pub samples_used: [usize; 2],
}

fn unwrap_phase(mut v: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    let mut prev: Option<f64> = None;
    for (_, l) in v.iter_mut() {
        if let Some(p) = prev {
            l.im += (2.0 * PI) * ((p - l.im) / (2.0 * PI)).round();
        }
        prev = Some(l.im);
    }
    v
}

/// Least-squares fit of the complex logarithms of the two exponential
/// modes of the sample against the model of [`StokesParameters`].
pub fn fit_stokes_model(sample: &StokesSample, spec: &InterlacedSpec) -> Result<StokesModel> {
    let (q, r) = (spec.q as usize, spec.r as usize);
    if sample.k != spec.q {
        return Err(Error::InvalidInput(format!("sample level {} does not match q = {q}", sample.k)));
    }
    let nb = q - r;
    // unknowns: Re/Im log κ1, Re/Im log κ2, α_0..α_{q−1}, a_q, β_0..β_{nb−1}, ω
    let na = 4 + q + 1 + nb + 1;
    let i = Complex64::i();
    let mut order: Vec<usize> = (0..sample.len()).collect();
    order.sort_by(|&a, &b| sample.moduli[b].total_cmp(&sample.moduli[a]));
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut used = [0usize; 2];
    for (j, sigma) in [(0usize, 1.0f64), (1, -1.0)] {
        let mut logs = Vec::new();
        for &s in &order {
            let [d1, d2] = sample.values[s];
            let u = (d1 + sigma * i * d2) / 2.0;
            let err = (sample.errors[s][0] + sample.errors[s][1]) / 2.0;
            if u.norm() > NOISE_FACTOR * err && u.norm() > 0.0 && u.is_finite() {
                logs.push((s, u.ln()));
            }
        }
        let logs = unwrap_phase(logs);
        used[j] = logs.len();
        for (s, l) in logs {
            let rho = sample.moduli[s];
            let lr = rho.ln();
            let phi = sample.phi;
            let xp = |e: i32| Complex64::from_polar(rho.powi(e), phi * e as f64);
            let mut re = vec![0.0; na];
            let mut im = vec![0.0; na];
            re[2 * j] = 1.0;
            im[2 * j + 1] = 1.0;
            for m in 0..q {
                let z = xp(m as i32 - q as i32);
                re[4 + m] = z.re;
                im[4 + m] = z.im;
            }
            re[4 + q] = lr;
            im[4 + q] = phi;
            for m in 0..nb {
                let z = xp(m as i32 - nb as i32);
                re[5 + q + m] = -sigma * z.im;
                im[5 + q + m] = sigma * z.re;
            }
            re[na - 1] = -sigma * phi;
            im[na - 1] = sigma * lr;
            rows.push((re, l.re));
            rows.push((im, l.im));
        }
    }
    if rows.len() < 2 * na.min(4) || used.iter().all(|&u| u < 3) {
        return Err(Error::DegenerateFit("too few samples above the noise floor".into()));
    }
    let a = DMatrix::from_fn(rows.len(), na, |i, j| rows[i].0[j]);
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    // column scaling keeps the singular-value cutoff meaningful
    let scales: Vec<f64> = (0..na).map(|j| a.column(j).norm().max(1e-300)).collect();
    let mut an = a.clone();
    for (j, s) in scales.iter().enumerate() {
        an.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = an.svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let p = svd.solve(&y, eps).map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let p: Vec<f64> = p.iter().zip(&scales).map(|(v, s)| v / s).collect();
    let res = &a * DVector::from_column_slice(&p) - &y;
    let residual_rms = (res.norm_squared() / rows.len() as f64).sqrt();
    let kappa = |j: usize| if used[j] > 0 { Complex64::new(p[2 * j], p[2 * j + 1]).exp() } else { Complex64::new(0.0, 0.0) };
    let fitted = StokesParameters {
        q_a: p[4..4 + q].to_vec(),
        power_exponent: p[4 + q],
        q_b: p[5 + q..5 + q + nb].to_vec(),
        osc_freq: p[na - 1],
        constants: [kappa(0), kappa(1)],
    };
    let max_relative_residual = (0..sample.len())
        .map(|s| {
            let m = fitted.evaluate(sample.moduli[s], sample.phi);
            let d = sample.values[s];
            let num = ((m[0] - d[0]).norm_sqr() + (m[1] - d[1]).norm_sqr()).sqrt();
            let den = (d[0].norm_sqr() + d[1].norm_sqr()).sqrt();
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    Ok(StokesModel {
        exp_rate: fitted.exp_rate(),
        power_exponent: fitted.power_exponent,
        osc_freq: fitted.osc_freq,
        fitted,
        predicted: predicted_parameters(spec),
        residual_rms,
        max_relative_residual,
        samples_used: used,
    })
}

/// Fit of a sample from any system spec with an interlaced form.
pub fn fit_stokes_model_for(sample: &StokesSample, spec: &SystemSpec) -> Result<StokesModel> {
    match spec {
        SystemSpec::Interlaced(s) => fit_stokes_model(sample, s),
        SystemSpec::FinalForm(_) => Err(Error::InvalidInput("Stokes model fit needs an interlaced final form".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Poly;
    use crate::odeforms::{example_interlaced, formal_solution};

    #[test]
    fn singular_sets() {
        let mut s = example_interlaced();
        assert_eq!(singular_directions(&s).len(), 1);
        s.q = 3;
        let d = singular_directions(&s);
        assert_eq!(d.dirs(), &[Direction::zero(), Direction::from_turn_fraction(1, 3), Direction::from_turn_fraction(2, 3)]);
    }

    #[test]
    fn offset_respects_sector() {
        let s = roots_of_unity(1);
        assert!((lateral_offset(Direction::zero(), 0.3, 1, &s).unwrap() - PI / 8.0).abs() < 1e-15);
        let d = lateral_offset(Direction::zero(), 1.4, 1, &s).unwrap();
        assert!((d - 0.75 * (PI / 2.0 - 1.4)).abs() < 1e-15);
        assert!(lateral_offset(Direction::zero(), 1.6, 1, &s).is_err());
        let s2 = roots_of_unity(2);
        assert!((lateral_offset(Direction::new(PI), PI, 2, &s2).unwrap() - PI / 16.0).abs() < 1e-15);
    }

    #[test]
    fn euler_residue() {
        let cfg = QuadratureConfig::default();
        let b = crate::series::TruncatedSeries::new(vec![Complex64::new(1.0, 0.0); 60]);
        let cont = BorelContinuation::new(&b, 1, &cfg).unwrap();
        let xs: Vec<Complex64> = [0.05, 0.1, 0.2].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for p in lateral_pairs(&cont, Direction::zero(), PI / 8.0, &xs, &cfg).unwrap() {
            let x = p.x;
            let exact = 2.0 * PI * Complex64::i() * (-1.0 / x).exp() / x;
            let d = p.difference().value;
            assert!((d - exact).norm() / exact.norm() < 1e-6, "{x}: {d} vs {exact}");
        }
    }

    #[test]
    fn zero_solution_has_no_stokes_jump() {
        let spec = InterlacedSpec::linear(1, 1, example_interlaced().a, example_interlaced().b, [Poly::zero(), Poly::zero()]);
        let h = formal_solution(&spec, 20).unwrap();
        let s = stokes_difference(&h, Direction::zero(), 0.3, &[0.1, 0.2], &QuadratureConfig::default()).unwrap();
        assert!(s.values.iter().all(|v| v[0].norm() == 0.0 && v[1].norm() == 0.0));
    }

    #[test]
    fn synthetic_recovery() {
        let spec = example_interlaced();
        let truth = StokesParameters {
            q_a: vec![-1.0],
            power_exponent: 0.25,
            q_b: vec![],
            osc_freq: 1.0,
            constants: [Complex64::new(0.7, -1.2), Complex64::new(-0.3, 0.4)],
        };
        let phi = 0.3;
        let moduli = log_moduli(0.08, 0.8, 12);
        let values: Vec<_> = moduli.iter().map(|&r| truth.evaluate(r, phi)).collect();
        let sample = StokesSample {
            theta: Direction::zero(),
            phi,
            k: 1,
            offset: PI / 8.0,
            points: ray_points(phi, &moduli),
            errors: vec![[0.0; 2]; moduli.len()],
            moduli,
            values,
        };
        let m = fit_stokes_model(&sample, &spec).unwrap();
        assert!((m.exp_rate - 1.0).abs() < 1e-6);
        assert!((m.power_exponent - 0.25).abs() < 1e-6);
        assert!((m.osc_freq - 1.0).abs() < 1e-6);
        for j in 0..2 {
            assert!((m.fitted.constants[j] - truth.constants[j]).norm() < 1e-6);
        }
        assert!(m.max_relative_residual < 1e-9);
    }

    #[test]
    fn zero_sample_is_degenerate() {
        let moduli = log_moduli(0.1, 1.0, 8);
        let sample = StokesSample {
            theta: Direction::zero(),
            phi: 0.0,
            k: 1,
            offset: 0.1,
            points: ray_points(0.0, &moduli),
            values: vec![[Complex64::new(0.0, 0.0); 2]; 8],
            errors: vec![[1e-12; 2]; 8],
            moduli,
        };
        assert!(matches!(fit_stokes_model(&sample, &example_interlaced()), Err(Error::DegenerateFit(_))));
    }
}
