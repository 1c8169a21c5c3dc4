//! Batch front end: spec files in, JSON reports and CSV coefficient
//! tables out.

mod specfile;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub use specfile::{
    mat_value, parse_poly, parse_poly_arg, parse_rational, parse_rational_str, parse_relation, parse_relation_value,
    parse_spec, parse_spec_str, parse_spec_value, poly_value, rational_text, rational_value, spec_value, FORMAT_VERSION,
};

use crate::error::{Error, Result};
use crate::gauge::{compute_gauge, gauge_identity_residual, pullback_system};
use crate::matrix::PolyMat2;
use crate::odeforms::{
    formal_solution, gevrey_estimate, ode_residual, rk_shift, validate_system, ClauseKind, FormalSolution, InterlacedSpec,
    SystemSpec, ValidationReport,
};
use crate::satcheck::{
    compose_solution, exponential_separation, singular_indices, stokes_composition_check_with, witness_search_with,
    witness_variables, CompositionOptions, QShortPoly, SeparationReport,
};
use crate::series::{MultiSeries, Rational, TruncatedSeries, Valuation};
use crate::summation::{
    asymptotic_check, borel_transform_exact, fit_stokes_model, log_moduli, ray_points, solution_continuations,
    stokes_difference, Direction, QuadratureConfig, StokesModel, StokesParameters, StokesSample,
};

pub const TOOL_NAME: &str = "stokes";
/// Coefficients compared by the asymptotic check of `sum`.
const ASYMPTOTIC_TERMS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Solve,
    Gauge,
    Shift,
    Borel,
    Sum,
    Stokes,
    Compose,
    Separate,
    Witness,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Validate,
        Command::Solve,
        Command::Gauge,
        Command::Shift,
        Command::Borel,
        Command::Sum,
        Command::Stokes,
        Command::Compose,
        Command::Separate,
        Command::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Solve => "solve",
            Command::Gauge => "gauge",
            Command::Shift => "shift",
            Command::Borel => "borel",
            Command::Sum => "sum",
            Command::Stokes => "stokes",
            Command::Compose => "compose",
            Command::Separate => "separate",
            Command::Witness => "witness",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::InvalidInput(format!("unknown command {s:?}")))
    }
}

/// Options shared by all commands.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub order: usize,
    pub theta: f64,
    /// Sample ray; defaults to `theta`.
    pub ray: Option<f64>,
    pub samples: usize,
    pub xmin: f64,
    pub xmax: f64,
    /// Relative quadrature tolerance overriding the profile.
    pub tol: Option<f64>,
    pub seed: u64,
    /// Polynomials as comma-separated coefficients from degree 0.
    pub polys: Vec<String>,
    pub relation: Option<PathBuf>,
    /// Quadrature profile overriding the environment.
    pub profile: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: 40,
            theta: 0.0,
            ray: None,
            samples: 12,
            xmin: 0.08,
            xmax: 0.8,
            tol: None,
            seed: 0,
            polys: Vec::new(),
            relation: None,
            profile: None,
        }
    }
}

impl Options {
    pub fn quadrature(&self) -> Result<QuadratureConfig> {
        let mut cfg = match &self.profile {
            Some(p) => QuadratureConfig::profile(p).ok_or_else(|| Error::InvalidInput(format!("unknown quadrature profile {p:?}")))?,
            None => QuadratureConfig::from_env(),
        };
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(Error::InvalidInput("--tol must be positive".into()));
            }
            cfg.rel_tol = t;
        }
        Ok(cfg)
    }

    fn ray(&self) -> f64 {
        self.ray.unwrap_or(self.theta)
    }

    fn moduli(&self) -> Result<Vec<f64>> {
        if !(self.xmin > 0.0 && self.xmax >= self.xmin) || self.samples == 0 {
            return Err(Error::InvalidInput("need 0 < xmin ≤ xmax and at least one sample".into()));
        }
        Ok(log_moduli(self.xmin, self.xmax, self.samples))
    }
}

/// A finished run: the JSON report, CSV tables and the exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: Command,
    pub status: i32,
    pub json: Value,
    /// `(file name, contents)`.
    pub tables: Vec<(String, String)>,
}

impl RunReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).unwrap_or_default()
    }

    /// Writes `<command>.json` and every table into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let p = dir.join(format!("{}.json", self.command));
        std::fs::write(&p, self.to_json_string() + "\n")?;
        written.push(p);
        for (name, text) in &self.tables {
            let p = dir.join(name);
            std::fs::write(&p, text)?;
            written.push(p);
        }
        Ok(written)
    }

    /// What goes to stdout without `--out`: the first table for `solve`,
    /// the JSON report otherwise.
    pub fn stdout_text(&self) -> String {
        match (self.command, self.tables.first()) {
            (Command::Solve, Some((_, t))) => t.clone(),
            _ => self.to_json_string() + "\n",
        }
    }
}

/// Exit status for an error: 1 for rejected input, 2 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Validation(_) | Error::Parse { .. } | Error::Io(_) | Error::NonzeroConstant(_) => 1,
        _ => 2,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::NonzeroConstant(_) => "nonzero_constant",
        Error::NotInvertible(_) => "not_invertible",
        Error::Validation(_) => "validation",
        Error::RecursionBlocked { .. } => "recursion_blocked",
        Error::TooFewCoefficients { .. } => "too_few_coefficients",
        Error::NearPole { .. } => "near_pole",
        Error::Quadrature { .. } => "quadrature",
        Error::Direction(_) => "direction",
        Error::DegenerateFit(_) => "degenerate_fit",
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
    }
}

/// Structured error document for stderr.
pub fn error_value(e: &Error) -> Value {
    let mut o = Map::new();
    o.insert("error".into(), json!(error_kind(e)));
    o.insert("message".into(), json!(e.to_string()));
    o.insert("exit_code".into(), json!(exit_code(e)));
    match e {
        Error::Parse { path, .. } => {
            o.insert("path".into(), json!(path));
        }
        Error::Validation(r) => {
            o.insert("report".into(), validation_value(r));
        }
        _ => {}
    }
    Value::Object(o)
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn series_value(s: &TruncatedSeries<Rational>, from: usize) -> Value {
    Value::Array(s.coeffs().iter().skip(from).map(rational_value).collect())
}

fn polymat_value(m: &PolyMat2) -> Value {
    Value::Array(m.coeffs().iter().map(mat_value).collect())
}

pub fn validation_value(r: &ValidationReport) -> Value {
    let clauses: Vec<Value> = r
        .clauses
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "kind": match c.kind { ClauseKind::Required => "required", ClauseKind::Advisory => "advisory" },
                "passed": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    json!({
        "kind": r.kind,
        "valid": r.is_valid(),
        "clauses": clauses,
        "failures": r.failures(),
        "trace": r.trace.as_ref().map(|t| json!({"l": t.l, "alpha": rational_value(&t.alpha)})),
    })
}

fn params_value(p: &StokesParameters) -> Value {
    json!({
        "exp_rate": p.exp_rate(),
        "q_a": p.q_a,
        "power_exponent": p.power_exponent,
        "q_b": p.q_b,
        "osc_freq": p.osc_freq,
        "constants": [complex_value(p.constants[0]), complex_value(p.constants[1])],
    })
}

pub fn stokes_sample_value(s: &StokesSample) -> Value {
    let rows: Vec<Value> = (0..s.len())
        .map(|i| {
            json!({
                "modulus": s.moduli[i],
                "x": complex_value(s.points[i]),
                "delta_h1": complex_value(s.values[i][0]),
                "delta_h2": complex_value(s.values[i][1]),
                "error": s.errors[i],
            })
        })
        .collect();
    json!({"theta": s.theta.theta(), "phi": s.phi, "k": s.k, "offset": s.offset, "samples": rows})
}

pub fn stokes_model_value(m: &StokesModel) -> Value {
    json!({
        "exp_rate": m.exp_rate,
        "power_exponent": m.power_exponent,
        "osc_freq": m.osc_freq,
        "fitted": params_value(&m.fitted),
        "predicted": params_value(&m.predicted),
        "residual_rms": m.residual_rms,
        "max_relative_residual": m.max_relative_residual,
        "samples_used": m.samples_used,
    })
}

pub fn separation_value(r: &SeparationReport) -> Value {
    let pairs: Vec<Value> = r
        .pairwise
        .iter()
        .map(|p| {
            let terms: Vec<Value> = p.part.principal().iter().map(|(e, c)| json!({"exponent": e, "coeff": rational_value(c)})).collect();
            json!({"j1": p.j1, "j2": p.j2, "principal_part": terms})
        })
        .collect();
    json!({
        "omega": r.omega,
        "pairwise": pairs,
        "violations": r.violations,
        "phi": r.phi,
        "admissible": r.admissible,
        "dominance": r.dominance,
        "j0": r.j0,
        "suggested_phi": r.suggested_phi,
    })
}

fn coefficient_csv(rows: impl Iterator<Item = (usize, [Rational; 2])>) -> String {
    let mut out = String::from("n,h1_num,h1_den,h2_num,h2_den\n");
    for (n, [a, b]) in rows {
        out.push_str(&format!("{n},{},{},{},{}\n", a.numer(), a.denom(), b.numer(), b.denom()));
    }
    out
}

fn interlaced(spec: &SystemSpec, cmd: Command) -> Result<&InterlacedSpec> {
    match spec {
        SystemSpec::Interlaced(s) => Ok(s),
        SystemSpec::FinalForm(_) => Err(Error::InvalidInput(format!("{cmd} needs an interlaced spec; run gauge first"))),
    }
}

fn polys(opts: &Options, q: u32) -> Result<Vec<QShortPoly>> {
    if opts.polys.is_empty() {
        return Err(Error::InvalidInput("at least one --poly is required".into()));
    }
    opts.polys.iter().map(|s| QShortPoly::new(parse_poly_arg(s)?, q)).collect()
}

fn relation(opts: &Options, n: usize) -> Result<MultiSeries<Rational>> {
    match &opts.relation {
        Some(p) => parse_relation(p),
        None => {
            let vars = witness_variables(n);
            let mut e = vec![0; vars.len()];
            e[1] = 1;
            Ok(MultiSeries::from_terms(vars, [(e, Rational::from_integer(1.into()))], None))
        }
    }
}

/// Parses `spec_path` and runs `cmd`.
pub fn run_pipeline(cmd: Command, spec_path: &Path, opts: &Options) -> Result<RunReport> {
    let text = std::fs::read_to_string(spec_path).map_err(|e| Error::Io(format!("{}: {e}", spec_path.display())))?;
    if cmd == Command::Validate {
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse { path: "$".into(), message: e.to_string() })?;
        let spec = parse_spec_value(&v)?;
        return run_on_spec(cmd, &spec, &spec_path.display().to_string(), opts);
    }
    let spec = parse_spec_str(&text)?;
    run_on_spec(cmd, &spec, &spec_path.display().to_string(), opts)
}

/// Runs `cmd` on an already parsed spec; `source` labels the report.
pub fn run_on_spec(cmd: Command, spec: &SystemSpec, source: &str, opts: &Options) -> Result<RunReport> {
    let cfg = opts.quadrature()?;
    let mut report = json!({
        "tool": TOOL_NAME,
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd.name(),
        "spec": source,
        "seed": opts.seed,
        "quadrature": {
            "max_subdivisions": cfg.max_subdivisions,
            "abs_tol": cfg.abs_tol,
            "rel_tol": cfg.rel_tol,
            "pade_order": cfg.pade_order,
            "cutoff": cfg.cutoff,
        },
    });
    let mut tables = Vec::new();
    let mut status = 0;
    let stage = match cmd {
        Command::Validate => {
            let r = validate_system(spec);
            if !r.is_valid() {
                status = 1;
            }
            validation_value(&r)
        }
        Command::Solve => {
            let h = formal_solution(spec.clone(), opts.order)?;
            tables.push(("solve.csv".to_string(), coefficient_csv((1..=h.certified_order).map(|n| (n, h.coeff(n))))));
            let res = ode_residual(spec.clone(), &h.h, h.certified_order)?;
            let vanish = res.iter().map(|r| match r.valuation() {
                Valuation::Finite(n) => n,
                Valuation::ZeroToOrder(n) => n + 1,
            });
            let gev = gevrey_estimate(&h).ok();
            json!({
                "requested_order": opts.order,
                "certified_order": h.certified_order,
                "residual_vanishes_to_order": vanish.min(),
                "h1": series_value(&h.h[0], 1),
                "h2": series_value(&h.h[1], 1),
                "gevrey": gev.map(|g| json!({
                    "s_estimate": g.s_estimate,
                    "constant_estimate": g.constant_estimate,
                    "divergent_flag": g.divergent_flag,
                    "points_used": g.points_used,
                    "order": g.order,
                })),
            })
        }
        Command::Gauge => {
            let ff = match spec {
                SystemSpec::FinalForm(f) => f.clone(),
                SystemSpec::Interlaced(s) => s.as_final_form(),
            };
            let g = compute_gauge(&ff)?;
            let pulled = pullback_system(&ff, &g, opts.order)?;
            json!({
                "T": polymat_value(&g.t),
                "N": g.n_mats.iter().map(mat_value).collect::<Vec<_>>(),
                "E": polymat_value(&g.e),
                "identity_holds": gauge_identity_residual(&ff, &g).is_zero(),
                "certified_order": opts.order,
                "interlaced": spec_value(&SystemSpec::Interlaced(pulled)),
            })
        }
        Command::Shift => {
            let s = interlaced(spec, cmd)?;
            let r = rk_shift(s, opts.order)?;
            let h = &r.new_solution_prefix;
            tables.push(("shift.csv".to_string(), coefficient_csv((1..=h.certified_order).map(|n| (n, h.coeff(n))))));
            json!({
                "p": [rational_value(&r.p[0]), rational_value(&r.p[1])],
                "d": [poly_value(&r.new_spec.c[0]), poly_value(&r.new_spec.c[1])],
                "new_spec": spec_value(&SystemSpec::Interlaced(r.new_spec.clone())),
                "certified_order": h.certified_order,
            })
        }
        Command::Borel => {
            let h = formal_solution(spec.clone(), opts.order)?;
            let conts = solution_continuations(&h, &cfg)?;
            let comps: Vec<Value> = (0..2)
                .map(|i| {
                    let b = borel_transform_exact(&h.h[i].truncate(h.certified_order), h.q)?;
                    let pade = conts[i].approximant();
                    Ok(json!({
                        "coefficients": b.coeffs().iter().map(|z| complex_value(*z)).collect::<Vec<_>>(),
                        "pade_degrees": pade.degrees(),
                        "poles": pade.poles().iter().map(|z| complex_value(*z)).collect::<Vec<_>>(),
                    }))
                })
                .collect::<Result<_>>()?;
            json!({"level": h.q, "certified_order": h.certified_order, "components": comps})
        }
        Command::Sum => {
            let h = formal_solution(spec.clone(), opts.order)?;
            let conts = solution_continuations(&h, &cfg)?;
            let points = ray_points(opts.ray(), &opts.moduli()?);
            let mut comps = Vec::new();
            for i in 0..2 {
                let vals = points.iter().map(|&x| conts[i].sum_along(opts.theta, x, &cfg)).collect::<Result<Vec<_>>>()?;
                let f = h.h[i].truncate(h.certified_order.min(ASYMPTOTIC_TERMS)).to_complex();
                let chk = asymptotic_check(&vals, &f, h.q);
                comps.push(json!({
                    "values": vals.iter().map(|v| json!({"x": complex_value(v.x), "value": complex_value(v.value), "error": v.error})).collect::<Vec<_>>(),
                    "asymptotic_check": {
                        "passed": chk.passed,
                        "constant": chk.constant,
                        "failure_order": chk.failure_order,
                        "orders_checked": chk.orders_checked,
                        "reason": chk.reason,
                    },
                }));
            }
            json!({"theta": opts.theta, "ray": opts.ray(), "level": h.q, "certified_order": h.certified_order, "components": comps})
        }
        Command::Stokes => {
            let s = interlaced(spec, cmd)?;
            let h = formal_solution(s.clone(), opts.order)?;
            let sample = stokes_difference(&h, Direction::new(opts.theta), opts.ray(), &opts.moduli()?, &cfg)?;
            let model = fit_stokes_model(&sample, s)?;
            json!({"certified_order": h.certified_order, "sample": stokes_sample_value(&sample), "model": stokes_model_value(&model)})
        }
        Command::Compose => {
            let h = formal_solution(spec.clone(), opts.order)?;
            let ps = polys(opts, h.q)?;
            let mut comps = Vec::new();
            for (j, p) in ps.iter().enumerate() {
                let c = compose_solution(&h, p, opts.order)?;
                let rows = (1..=c.certified_order).map(|n| (n, [c.series[0].coeff(n).clone(), c.series[1].coeff(n).clone()]));
                tables.push((format!("compose_{}.csv", j + 1), coefficient_csv(rows)));
                comps.push(json!({"j": j + 1, "poly": poly_value(p.poly()), "nu": p.nu(), "certified_order": c.certified_order}));
            }
            let mut stage = json!({"compositions": comps});
            if opts.relation.is_some() {
                let s = interlaced(spec, cmd)?;
                let f = relation(opts, ps.len())?;
                let co = CompositionOptions { order: opts.order, quadrature: cfg.clone(), ..Default::default() };
                let points = ray_points(opts.ray(), &opts.moduli()?);
                let r = stokes_composition_check_with(&f, s, &h, &ps, Direction::new(opts.theta), &points, &co)?;
                stage["stokes_check"] = json!({
                    "omega": r.omega,
                    "max_relative_error": r.max_relative_error,
                    "dominant_consistent": r.dominant_consistent,
                    "samples": r.samples.iter().map(|s| json!({
                        "x": complex_value(s.x),
                        "lhs": complex_value(s.lhs),
                        "rhs": complex_value(s.rhs),
                        "relative_error": s.relative_error,
                        "quadrature_error": s.quadrature_error,
                    })).collect::<Vec<_>>(),
                    "separation": separation_value(&r.separation),
                });
            }
            stage
        }
        Command::Separate => {
            let s = interlaced(spec, cmd)?;
            let ps = polys(opts, s.q)?;
            let theta = Direction::new(opts.theta);
            let mut omega = singular_indices(&ps, s.q, theta);
            if omega.is_empty() {
                omega = (1..=ps.len()).collect();
            }
            separation_value(&exponential_separation(&s.a, s.q, &ps, &omega, opts.ray(), theta)?)
        }
        Command::Witness => {
            let h: FormalSolution = formal_solution(spec.clone(), opts.order)?;
            let ps = polys(opts, h.q)?;
            let f = relation(opts, ps.len())?;
            let r = witness_search_with(&f, &h, &ps, opts.order)?;
            json!({
                "certified_order": r.certified_order,
                "zero_to_certified_order": r.is_zero_to_order(),
                "first_nonzero_order": r.first_nonzero_order,
                "leading_coefficient": r.leading_coefficient.as_ref().map(rational_value),
                "derivative": r.derivative.as_ref().map(|d| json!({
                    "i": d.i, "j": d.j, "d": d.d,
                    "first_nonzero_order": d.first_nonzero_order,
                    "certified_order": d.certified_order,
                })),
                "exhausted": r.exhausted,
                "lambda": r.lambda,
            })
        }
    };
    report[cmd.name()] = stage;
    Ok(RunReport { command: cmd, status, json: report, tables })
}
