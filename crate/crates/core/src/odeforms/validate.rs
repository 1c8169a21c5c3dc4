//! Structural checks for the two normal forms.

use std::fmt;

use num_traits::{Signed, Zero};

use super::{FinalFormSpec, InterlacedSpec, SystemSpec, VectorField, FIELD_VARIABLES};
use crate::matrix::Poly;
use crate::series::Rational;

/// Whether a failed clause invalidates the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseKind {
    /// Part of the normal-form definition.
    Required,
    /// Needed only by later stages (e.g. the rotation-dilation shape of
    /// `J(0)` for gauge reduction).
    Advisory,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub name: String,
    pub kind: ClauseKind,
    pub passed: bool,
    pub detail: String,
}

/// `trace A(x) = α x^l + O(x^{l+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceData {
    pub l: usize,
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub kind: &'static str,
    pub clauses: Vec<Clause>,
    /// `None` when `trace A` vanishes identically.
    pub trace: Option<TraceData>,
}

impl ValidationReport {
    fn new(kind: &'static str) -> Self {
        ValidationReport { kind, clauses: Vec::new(), trace: None }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.push(name, ClauseKind::Required, passed, detail);
    }

    fn push(&mut self, name: &str, kind: ClauseKind, passed: bool, detail: impl Into<String>) {
        self.clauses.push(Clause { name: name.to_string(), kind, passed, detail: detail.into() });
    }

    /// All required clauses pass.
    pub fn is_valid(&self) -> bool {
        self.clauses.iter().all(|c| c.passed || c.kind == ClauseKind::Advisory)
    }

    /// `"<clause> fails"` for every failed required clause.
    pub fn failures(&self) -> Vec<String> {
        self.clauses
            .iter()
            .filter(|c| !c.passed && c.kind == ClauseKind::Required)
            .map(|c| format!("{} fails", c.name))
            .collect()
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} system: {}", self.kind, if self.is_valid() { "valid" } else { "invalid" })?;
        for c in &self.clauses {
            let mark = match (c.passed, c.kind) {
                (true, _) => "ok",
                (false, ClauseKind::Required) => "FAIL",
                (false, ClauseKind::Advisory) => "warn",
            };
            writeln!(f, "  [{mark}] {} ({})", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn deg_str(p: &Poly) -> String {
    match p.degree() {
        Some(d) => format!("degree {d}"),
        None => "zero".into(),
    }
}

fn deg_at_most(p: &Poly, bound: i64) -> bool {
    match p.degree() {
        Some(d) => (d as i64) <= bound,
        None => true,
    }
}

fn check_field(report: &mut ValidationReport, g: &VectorField) {
    let ok = g.iter().all(|gi| gi.variables().iter().map(String::as_str).eq(FIELD_VARIABLES));
    report.check("g in variables (X, Y1, Y2)", ok, format!("expected {FIELD_VARIABLES:?}"));
}

fn check_trace(report: &mut ValidationReport, trace: &Poly, q: u32) {
    match (trace.order(), trace.lowest_coeff()) {
        (Some(l), Some(alpha)) => {
            report.check("trace order l < q", (l as u32) < q, format!("l = {l}"));
            report.check("trace coefficient α > 0", alpha.is_positive(), format!("α = {alpha}"));
            report.trace = Some(TraceData { l, alpha: alpha.clone() });
        }
        _ => {
            report.check("trace order l < q", false, "trace A vanishes identically");
            report.check("trace coefficient α > 0", false, "trace A vanishes identically");
        }
    }
}

fn validate_interlaced(s: &InterlacedSpec) -> ValidationReport {
    let mut rep = ValidationReport::new("interlaced");
    let (q, r) = (s.q as i64, s.r as i64);
    rep.check("q ≥ 1", q >= 1, format!("q = {q}"));
    rep.check("1 ≤ r ≤ q", 1 <= r && r <= q, format!("r = {r}"));
    rep.check("deg a ≤ q", deg_at_most(&s.a, q), deg_str(&s.a));
    let a0 = s.a.coeff(0);
    rep.check("a₀ > 0", a0.is_positive(), format!("a₀ = {a0}"));
    rep.check("deg b ≤ q − r", deg_at_most(&s.b, q - r), deg_str(&s.b));
    let b0 = s.b.coeff(0);
    rep.check("b₀ ≠ 0", !b0.is_zero(), format!("b₀ = {b0}"));
    rep.check(
        "deg c ≤ q",
        deg_at_most(&s.c[0], q) && deg_at_most(&s.c[1], q),
        format!("{}, {}", deg_str(&s.c[0]), deg_str(&s.c[1])),
    );
    let c0 = [s.c[0].coeff(0), s.c[1].coeff(0)];
    rep.check("c(0) = 0", c0.iter().all(Zero::is_zero), format!("c(0) = ({}, {})", c0[0], c0[1]));
    check_field(&mut rep, &s.g);
    check_trace(&mut rep, &s.linear_part().trace(), s.q);
    rep
}

fn validate_final_form(s: &FinalFormSpec) -> ValidationReport {
    let mut rep = ValidationReport::new("finalform");
    let (q, r) = (s.q as i64, s.r as i64);
    rep.check("q ≥ 1", q >= 1, format!("q = {q}"));
    rep.check("r ≤ q + 1", r <= q + 1, format!("r = {r}"));
    rep.check("deg a ≤ r − 1", deg_at_most(&s.a, r - 1), deg_str(&s.a));
    let j_deg_ok = match s.j.degree() {
        Some(d) => (d as i64) <= q - r,
        None => true,
    };
    rep.check("deg J ≤ q − r", j_deg_ok, format!("{:?}", s.j.degree()));
    let a_mat = s.linear_part();
    let a0 = a_mat.coeff(0);
    rep.check("A(0) has a nonzero eigenvalue", a0.has_nonzero_eigenvalue(), format!("A(0) = {:?}", a0.to_f64()));
    let j0 = s.j.coeff(0);
    if r <= q {
        let disc = j0.discriminant();
        rep.check("J(0) has distinct eigenvalues", !disc.is_zero(), format!("discriminant {disc}"));
        rep.check("J(0) has non-real eigenvalues", disc.is_negative(), format!("discriminant {disc}"));
        let shape = j0.rotation_dilation_parts();
        let ok = shape.as_ref().is_some_and(|(_, b)| !b.is_zero());
        let detail = match shape {
            Some((a, b)) => format!("𝔞 = {a}, 𝔟 = {b}"),
            None => "J(0) is not of the form (𝔞, −𝔟; 𝔟, 𝔞)".into(),
        };
        rep.push("J(0) = (𝔞, −𝔟; 𝔟, 𝔞) with 𝔟 ≠ 0", ClauseKind::Advisory, ok, detail);
    }
    check_field(&mut rep, &s.g);
    check_trace(&mut rep, &a_mat.trace(), s.q);
    rep
}

/// Checks every structural condition of the given normal form. Divergence
/// of the formal solution is not decided here; see
/// [`gevrey_estimate`](super::gevrey_estimate).
pub fn validate_system(spec: &SystemSpec) -> ValidationReport {
    match spec {
        SystemSpec::Interlaced(s) => validate_interlaced(s),
        SystemSpec::FinalForm(s) => validate_final_form(s),
    }
}
