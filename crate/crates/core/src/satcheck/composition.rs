//! Numerical check of `𝒮F∘{upper} − 𝒮F∘{lower} = Σ D_ij · (Δ_{ν_jθ} H_i) ∘ P_j`.

use num_complex::Complex64;

use super::qshort::QShortPoly;
use super::separation::{exponential_separation, singular_indices, SeparationReport};
use super::witness::{parse_z_name, Substitution};
use crate::error::{Error, Result};
use crate::odeforms::{formal_solution, FormalSolution, InterlacedSpec};
use crate::series::{rational_to_f64, MultiSeries, Rational, TruncatedSeries, Valuation};
use crate::summation::{lateral_offset, roots_of_unity, solution_continuations, BorelContinuation, Direction, QuadratureConfig};

/// Leading terms kept in the Taylor polynomials of `∂F/∂Z_ij ∘ {H ∘ P}`.
pub const DEFAULT_TAYLOR_TERMS: usize = 4;

#[derive(Clone, Debug)]
pub struct CompositionOptions {
    pub order: usize,
    pub taylor_terms: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for CompositionOptions {
    fn default() -> Self {
        CompositionOptions { order: 120, taylor_terms: DEFAULT_TAYLOR_TERMS, quadrature: QuadratureConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionSample {
    pub x: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_error: f64,
    /// Propagated quadrature error of the lateral sums.
    pub quadrature_error: f64,
    /// `|Σ_i D̃_ij · ΔH_i∘P_j|` per polynomial.
    pub contributions: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionReport {
    pub theta: Direction,
    pub phi: f64,
    pub omega: Vec<usize>,
    pub samples: Vec<CompositionSample>,
    pub max_relative_error: f64,
    pub separation: SeparationReport,
    /// The largest contribution at the smallest sampled modulus comes from
    /// the dominant index of the separation report.
    pub dominant_consistent: Option<bool>,
}

fn leading_terms(s: &TruncatedSeries<Rational>, terms: usize) -> Vec<(usize, f64)> {
    match s.valuation() {
        Valuation::Finite(v) => (v..(v + terms).min(s.order() + 1)).map(|n| (n, rational_to_f64(s.coeff(n)))).collect(),
        Valuation::ZeroToOrder(_) => Vec::new(),
    }
}

fn eval_terms(t: &[(usize, f64)], x: Complex64) -> Complex64 {
    t.iter().map(|&(n, c)| c * x.powi(n as i32)).sum()
}

fn eval_f(f: &MultiSeries<Rational>, x: Complex64, z: &dyn Fn(usize, usize) -> Complex64) -> Complex64 {
    let point: Vec<Complex64> = f
        .variables()
        .iter()
        .map(|v| match parse_z_name(v) {
            Some((i, j)) => z(i, j),
            None => x,
        })
        .collect();
    f.eval_complex(&point)
}

/// Compares both sides of the composed Stokes identity at every point of
/// `xs`, which must lie on one ray inside `V(θ, k_μ)`.
pub fn stokes_composition_check(
    f: &MultiSeries<Rational>,
    spec: &InterlacedSpec,
    ps: &[QShortPoly],
    theta: Direction,
    xs: &[Complex64],
    opts: &CompositionOptions,
) -> Result<CompositionReport> {
    let h = formal_solution(spec, opts.order)?;
    stokes_composition_check_with(f, spec, &h, ps, theta, xs, opts)
}

/// As [`stokes_composition_check`] for a precomputed solution.
pub fn stokes_composition_check_with(
    f: &MultiSeries<Rational>,
    spec: &InterlacedSpec,
    h: &FormalSolution,
    ps: &[QShortPoly],
    theta: Direction,
    xs: &[Complex64],
    opts: &CompositionOptions,
) -> Result<CompositionReport> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    for v in f.variables() {
        if v != "X" && parse_z_name(v).is_none_or(|(_, j)| j > ps.len()) {
            return Err(Error::InvalidInput(format!("unknown variable {v}")));
        }
    }
    let q = spec.q;
    let omega = singular_indices(ps, q, theta);
    if omega.is_empty() {
        return Err(Error::Direction(format!("ν_j·{} is not singular for any j", theta.theta())));
    }
    let phi = xs[0].arg();
    let s = roots_of_unity(q);
    let conts: [BorelContinuation; 2] = solution_continuations(h, &opts.quadrature)?;
    // per polynomial: (centre direction, offset or 0 when not singular)
    let rays: Vec<(f64, f64)> = ps
        .iter()
        .enumerate()
        .map(|(jj, p)| {
            let nu = p.nu();
            let centre = theta.theta() * nu as f64;
            if omega.contains(&(jj + 1)) {
                Ok((centre, lateral_offset(theta.times(nu), phi * nu as f64, q, &s)?))
            } else {
                Ok((centre, 0.0))
            }
        })
        .collect::<Result<_>>()?;

    let sub = Substitution::new(h, ps, opts.order)?;
    let mut dtilde: Vec<[Vec<(usize, f64)>; 2]> = Vec::with_capacity(ps.len());
    for j in 1..=ps.len() {
        let mut pair: [Vec<(usize, f64)>; 2] = [Vec::new(), Vec::new()];
        for i in 1..=2 {
            if let Some(v) = f.var_index(&format!("Z{i}{j}")) {
                let dv = sub.apply(&f.derivative(v))?;
                pair[i - 1] = leading_terms(&dv, opts.taylor_terms);
            }
        }
        dtilde.push(pair);
    }

    let cfg = &opts.quadrature;
    let mut samples = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut up = vec![[Complex64::new(0.0, 0.0); 2]; ps.len()];
        let mut lo = up.clone();
        let mut qerr = 0.0;
        for (jj, p) in ps.iter().enumerate() {
            let y = p.eval_complex(x);
            let (centre, delta) = rays[jj];
            for i in 0..2 {
                if h.h[i].is_zero() {
                    continue;
                }
                let u = conts[i].sum_along(centre + delta, y, cfg)?;
                let l = if delta == 0.0 { u } else { conts[i].sum_along(centre - delta, y, cfg)? };
                up[jj][i] = u.value;
                lo[jj][i] = l.value;
                qerr += u.error + if delta == 0.0 { 0.0 } else { l.error };
            }
        }
        let lhs = eval_f(f, x, &|i, j| up[j - 1][i - 1]) - eval_f(f, x, &|i, j| lo[j - 1][i - 1]);
        let contributions: Vec<Complex64> = (0..ps.len())
            .map(|jj| (0..2).map(|i| eval_terms(&dtilde[jj][i], x) * (up[jj][i] - lo[jj][i])).sum())
            .collect();
        let rhs: Complex64 = contributions.iter().sum();
        let relative_error = if lhs.norm() > 0.0 { (lhs - rhs).norm() / lhs.norm() } else { (lhs - rhs).norm() };
        samples.push(CompositionSample {
            x,
            lhs,
            rhs,
            relative_error,
            quadrature_error: qerr,
            contributions: contributions.iter().map(|c| c.norm()).collect(),
        });
    }

    let separation = exponential_separation(&spec.a, q, ps, &omega, phi, theta)?;
    let dominant_consistent = separation.j0.and_then(|j0| {
        let smallest = samples.iter().min_by(|a, b| a.x.norm().total_cmp(&b.x.norm()))?;
        let best = (0..ps.len()).max_by(|&a, &b| smallest.contributions[a].total_cmp(&smallest.contributions[b]))?;
        Some(best + 1 == j0)
    });
    let max_relative_error = samples.iter().map(|s| s.relative_error).fold(0.0, f64::max);
    Ok(CompositionReport { theta, phi, omega, samples, max_relative_error, separation, dominant_consistent })
}
