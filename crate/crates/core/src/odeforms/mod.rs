//! Planar singular systems `x^{q+1} y' = A(x) y + x^{q+1} g(x, y) + c(x)`
//! in final and interlaced final form: validation, formal solutions,
//! Gevrey growth estimates and the one-step shift `H ↦ (H - H'(0)) / X`.

mod shift;
mod solve;
mod validate;

use crate::matrix::{Mat2, Poly, PolyMat2};
use crate::series::{MultiSeries, Rational, TruncatedSeries};

pub use shift::{rk_shift, ShiftResult};
pub use solve::{formal_solution, gevrey_estimate, gevrey_estimate_series, ode_residual, FormalSolution, GevreyReport};
pub use validate::{validate_system, Clause, ClauseKind, TraceData, ValidationReport};

/// Variable names of the nonlinearity `g(X, Y1, Y2)`.
pub const FIELD_VARIABLES: [&str; 3] = ["X", "Y1", "Y2"];

/// Vector-valued nonlinearity `(g_1, g_2)` in the variables
/// [`FIELD_VARIABLES`].
pub type VectorField = [MultiSeries<Rational>; 2];

/// The zero nonlinearity, exact (no truncation).
pub fn zero_field() -> VectorField {
    let z = MultiSeries::with_vars(&FIELD_VARIABLES, [], None);
    [z.clone(), z]
}

/// Interlaced final form: `A(x) = a(x) I + x^r b(x) J`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterlacedSpec {
    pub q: u32,
    pub r: u32,
    pub a: Poly,
    pub b: Poly,
    pub c: [Poly; 2],
    pub g: VectorField,
}

/// Final form: `A(x) = a(x) I + x^r J(x)` with no forcing term.
#[derive(Clone, Debug, PartialEq)]
pub struct FinalFormSpec {
    pub q: u32,
    pub r: u32,
    pub a: Poly,
    pub j: PolyMat2,
    pub g: VectorField,
}

/// Either supported normal form.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemSpec {
    Interlaced(InterlacedSpec),
    FinalForm(FinalFormSpec),
}

impl InterlacedSpec {
    /// Linear system with `g = 0`.
    pub fn linear(q: u32, r: u32, a: Poly, b: Poly, c: [Poly; 2]) -> Self {
        InterlacedSpec { q, r, a, b, c, g: zero_field() }
    }

    pub fn linear_part(&self) -> PolyMat2 {
        PolyMat2::scalar(&self.a).add(&PolyMat2::scalar_times(&self.b.shift_up(self.r as usize), &Mat2::rotation()))
    }

    /// The same system seen as a final form with `J(x) = (a_{≥r}(x)/x^r) I + b(x) J`
    /// and `a` reduced to its part of degree below `r`. The forcing term is dropped.
    pub fn as_final_form(&self) -> FinalFormSpec {
        let r = self.r as usize;
        let low = Poly::new(self.a.coeffs().iter().take(r).cloned().collect());
        let high = self.a.shift_down(r);
        let j = PolyMat2::scalar(&high).add(&PolyMat2::scalar_times(&self.b, &Mat2::rotation()));
        FinalFormSpec { q: self.q, r: self.r, a: low, j, g: self.g.clone() }
    }
}

impl FinalFormSpec {
    pub fn linear_part(&self) -> PolyMat2 {
        PolyMat2::scalar(&self.a).add(&self.j.shift_up(self.r as usize))
    }
}

impl SystemSpec {
    pub fn q(&self) -> u32 {
        match self {
            SystemSpec::Interlaced(s) => s.q,
            SystemSpec::FinalForm(s) => s.q,
        }
    }

    pub fn r(&self) -> u32 {
        match self {
            SystemSpec::Interlaced(s) => s.r,
            SystemSpec::FinalForm(s) => s.r,
        }
    }

    /// `A(x)`.
    pub fn linear_part(&self) -> PolyMat2 {
        match self {
            SystemSpec::Interlaced(s) => s.linear_part(),
            SystemSpec::FinalForm(s) => s.linear_part(),
        }
    }

    /// `c(x)`; zero for final forms.
    pub fn forcing(&self) -> [Poly; 2] {
        match self {
            SystemSpec::Interlaced(s) => s.c.clone(),
            SystemSpec::FinalForm(_) => [Poly::zero(), Poly::zero()],
        }
    }

    pub fn nonlinearity(&self) -> &VectorField {
        match self {
            SystemSpec::Interlaced(s) => &s.g,
            SystemSpec::FinalForm(s) => &s.g,
        }
    }

    /// Order to which formal solutions are determined by the given data:
    /// unbounded for an exact `g`, else `q + D_g + 1`.
    pub fn certified_limit(&self) -> Option<usize> {
        let d = self.nonlinearity().iter().filter_map(|g| g.trunc()).min()?;
        Some(self.q() as usize + d as usize + 1)
    }
}

impl From<InterlacedSpec> for SystemSpec {
    fn from(s: InterlacedSpec) -> Self {
        SystemSpec::Interlaced(s)
    }
}

impl From<&InterlacedSpec> for SystemSpec {
    fn from(s: &InterlacedSpec) -> Self {
        SystemSpec::Interlaced(s.clone())
    }
}

impl From<FinalFormSpec> for SystemSpec {
    fn from(s: FinalFormSpec) -> Self {
        SystemSpec::FinalForm(s)
    }
}

impl From<&FinalFormSpec> for SystemSpec {
    fn from(s: &FinalFormSpec) -> Self {
        SystemSpec::FinalForm(s.clone())
    }
}

impl From<&SystemSpec> for SystemSpec {
    fn from(s: &SystemSpec) -> Self {
        s.clone()
    }
}

/// Pair of series helper: both components truncated to `order`.
pub(crate) fn truncate_pair(h: &[TruncatedSeries<Rational>; 2], order: usize) -> [TruncatedSeries<Rational>; 2] {
    std::array::from_fn(|i| {
        if h[i].order() >= order {
            h[i].truncate(order)
        } else {
            TruncatedSeries::from_poly(h[i].coeffs(), order)
        }
    })
}

/// The system of the first worked example: `q = r = 1`, `a = b = 1`,
/// `c = (X, 0)`, `g = 0`.
pub fn example_interlaced() -> InterlacedSpec {
    InterlacedSpec::linear(1, 1, Poly::from_ints(&[1]), Poly::from_ints(&[1]), [Poly::from_ints(&[0, 1]), Poly::zero()])
}

/// Final form with `q = 2`, `r = 1`, `a = 1`, `J(x) = J + x·E_{11}`.
pub fn example_final_form() -> FinalFormSpec {
    FinalFormSpec {
        q: 2,
        r: 1,
        a: Poly::from_ints(&[1]),
        j: PolyMat2::new(vec![Mat2::rotation(), Mat2::from_ints(1, 0, 0, 0)]),
        g: zero_field(),
    }
}
