//! Circle arithmetic: directions, open arcs, singular sets and the levels
//! of composed series.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

/// A point of the unit circle, `theta ∈ [0, 2π)`. Directions built from
/// rational fractions of a turn keep that fraction, so equal fractions
/// compare exactly.
#[derive(Clone, Copy, Debug)]
pub struct Direction {
    theta: f64,
    turn: Option<(i64, i64)>,
}

fn normalize(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if TAU - t < EPS {
        0.0
    } else {
        t
    }
}

/// `(p mod q)/q` in lowest terms with `q > 0`.
fn reduce_turn(p: i64, q: i64) -> (i64, i64) {
    assert!(q != 0, "zero denominator");
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    let p = p.rem_euclid(q);
    let g = p.gcd(&q).max(1);
    (p / g, q / g)
}

impl Direction {
    pub fn new(theta: f64) -> Self {
        Direction { theta: normalize(theta), turn: None }
    }

    /// `2π · num/den`.
    pub fn from_turn_fraction(num: i64, den: i64) -> Self {
        let (p, q) = reduce_turn(num, den);
        Direction { theta: TAU * p as f64 / q as f64, turn: Some((p, q)) }
    }

    pub fn zero() -> Self {
        Direction::from_turn_fraction(0, 1)
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    /// The exact fraction of a turn, if known.
    pub fn turn(self) -> Option<(i64, i64)> {
        self.turn
    }

    /// `self ⊕ δ`.
    /// `ν · self`, exact when the turn fraction is known.
    pub fn times(self, nu: u32) -> Self {
        match self.turn {
            Some((p, q)) => Direction::from_turn_fraction(p * nu as i64, q),
            None => Direction::new(self.theta * nu as f64),
        }
    }

    pub fn plus(self, delta: f64) -> Self {
        Direction::new(self.theta + delta)
    }

    /// `self ⊖ δ`.
    pub fn minus(self, delta: f64) -> Self {
        Direction::new(self.theta - delta)
    }

    /// `self ⊕ other`, exact when both are fractions of a turn.
    pub fn add(self, other: Direction) -> Self {
        match (self.turn, other.turn) {
            (Some((a, b)), Some((c, d))) => Direction::from_turn_fraction(a * d + c * b, b * d),
            _ => self.plus(other.theta),
        }
    }

    /// `self ⊖ other ∈ [0, 2π)`: the positive angle from `other` to `self`.
    pub fn ccw_from(self, other: Direction) -> f64 {
        if self == other {
            return 0.0;
        }
        normalize(self.theta - other.theta)
    }

    /// `d(θ, ζ) = min{θ ⊖ ζ, ζ ⊖ θ} ∈ [0, π]`.
    pub fn distance(self, other: Direction) -> f64 {
        let a = self.ccw_from(other);
        a.min(normalize(-a))
    }

    /// Signed representative of `self − reference` in `(−π, π]`.
    pub fn signed_offset(self, reference: Direction) -> f64 {
        let a = self.ccw_from(reference);
        if a > PI {
            a - TAU
        } else {
            a
        }
    }
}

impl PartialEq for Direction {
    fn eq(&self, other: &Self) -> bool {
        match (self.turn, other.turn) {
            (Some(a), Some(b)) => a == b,
            _ => {
                let d = (self.theta - other.theta).abs();
                d < EPS || (TAU - d) < EPS
            }
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.turn {
            Some((0, _)) => write!(f, "0"),
            Some((p, q)) => write!(f, "2π·{p}/{q}"),
            None => write!(f, "{:.12}", self.theta),
        }
    }
}

/// Open arc of the circle starting at `start` and running counterclockwise
/// for `length ∈ (0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub start: Direction,
    pub length: f64,
}

impl Arc {
    pub fn end(&self) -> Direction {
        self.start.plus(self.length)
    }

    pub fn midpoint(&self) -> Direction {
        self.start.plus(self.length / 2.0)
    }

    /// Strict containment (open arc).
    pub fn contains(&self, d: Direction) -> bool {
        let off = d.ccw_from(self.start);
        off > EPS && off < self.length - EPS
    }

    /// `m` equispaced interior points.
    pub fn sample(&self, m: usize) -> Vec<Direction> {
        (1..=m).map(|i| self.start.plus(self.length * i as f64 / (m + 1) as f64)).collect()
    }
}

/// `V(θ, k) = (θ ⊖ π/2k, θ ⊕ π/2k)`.
pub fn v_arc(theta: Direction, k: f64) -> Arc {
    Arc { start: theta.minus(PI / (2.0 * k)), length: PI / k }
}

/// `U(θ, ζ, k)`: the union of `V(φ, k)` over `φ` strictly between `θ` and
/// `ζ` on the shorter side; needs `d(θ, ζ) < π`.
pub fn u_arc(theta: Direction, zeta: Direction, k: f64) -> Result<Arc> {
    let d = theta.distance(zeta);
    if d >= PI - EPS {
        return Err(Error::Direction(format!("U({theta}, {zeta}) needs d < π, got {d}")));
    }
    let first = if zeta.ccw_from(theta) <= PI { theta } else { zeta };
    Ok(Arc { start: first.minus(PI / (2.0 * k)), length: d + PI / k })
}

/// Finite set of directions, sorted by angle, without duplicates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularSet {
    dirs: Vec<Direction>,
}

impl SingularSet {
    pub fn new(dirs: impl IntoIterator<Item = Direction>) -> Self {
        let mut v: Vec<Direction> = Vec::new();
        for d in dirs {
            if !v.contains(&d) {
                v.push(d);
            }
        }
        v.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        SingularSet { dirs: v }
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn contains(&self, d: Direction) -> bool {
        self.dirs.contains(&d)
    }

    pub fn union(&self, other: &SingularSet) -> SingularSet {
        SingularSet::new(self.dirs.iter().chain(other.dirs.iter()).copied())
    }

    /// `θ⁺(S)`: first element of `S ∪ {θ ⊕ π/2}` after `θ` counterclockwise.
    pub fn theta_plus(&self, theta: Direction) -> Direction {
        let mut best = theta.plus(PI / 2.0);
        let mut best_off = PI / 2.0;
        for &d in &self.dirs {
            let off = d.ccw_from(theta);
            if off > EPS && off < best_off {
                best = d;
                best_off = off;
            }
        }
        best
    }

    /// `θ⁻(S)`: first element of `S ∪ {θ ⊖ π/2}` after `θ` clockwise.
    pub fn theta_minus(&self, theta: Direction) -> Direction {
        let mut best = theta.minus(PI / 2.0);
        let mut best_off = PI / 2.0;
        for &d in &self.dirs {
            let off = theta.ccw_from(d);
            if off > EPS && off < best_off {
                best = d;
                best_off = off;
            }
        }
        best
    }

    /// Smallest distance from `theta` to an element of the set other than
    /// `theta` itself.
    pub fn gap_from(&self, theta: Direction) -> Option<f64> {
        self.dirs.iter().filter(|&&d| d != theta).map(|&d| d.distance(theta)).min_by(f64::total_cmp)
    }
}

impl fmt::Display for SingularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.dirs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Everything the circle calculus says about a pair of directions.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionReport {
    pub d: f64,
    pub v: Arc,
    /// `None` when `d(θ, ζ) = π`.
    pub u: Option<Arc>,
    pub theta_plus: Direction,
    pub theta_minus: Direction,
}

pub fn direction_calculus(theta: Direction, zeta: Direction, k: f64, s: &SingularSet) -> DirectionReport {
    DirectionReport {
        d: theta.distance(zeta),
        v: v_arc(theta, k),
        u: u_arc(theta, zeta, k).ok(),
        theta_plus: s.theta_plus(theta),
        theta_minus: s.theta_minus(theta),
    }
}

/// The `q`-th roots of unity `{2pπ/q}`, which contain the singular
/// directions of an interlaced system with `r ≥ 1`.
pub fn roots_of_unity(q: u32) -> SingularSet {
    SingularSet::new((0..q as i64).map(|p| Direction::from_turn_fraction(p, q as i64)))
}

/// `⋃_{μ<ν} (S + 2πμ)/ν`: the singular directions of `F ∘ P` for
/// `ord P = ν`.
pub fn composed_singulars(s: &SingularSet, nu: u32) -> Result<SingularSet> {
    if nu == 0 {
        return Err(Error::InvalidInput("ν must be at least 1".into()));
    }
    let nu = nu as i64;
    let mut out = Vec::new();
    for &d in s.dirs() {
        for mu in 0..nu {
            out.push(match d.turn() {
                Some((p, q)) => Direction::from_turn_fraction(p + mu * q, q * nu),
                None => Direction::new((d.theta() + TAU * mu as f64) / nu as f64),
            });
        }
    }
    Ok(SingularSet::new(out))
}

/// Levels `k(i, j) = ν_j q` of the composed series, their sorted distinct
/// values and the union `S′` of the composed singular sets.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionLevels {
    /// `k(j) = ν_j · q` for each polynomial (the same for every component).
    pub per_polynomial: Vec<u32>,
    pub levels: Vec<u32>,
    pub s_prime: SingularSet,
}

/// Level data for `H ∘ P_j` with `H` `q`-summable and singular directions
/// among the `q`-th roots of unity.
pub fn multisum_levels(q: u32, orders: &[u32]) -> Result<CompositionLevels> {
    if orders.contains(&0) {
        return Err(Error::InvalidInput("every polynomial needs positive order".into()));
    }
    let per: Vec<u32> = orders.iter().map(|nu| nu * q).collect();
    let mut levels = per.clone();
    levels.sort_unstable();
    levels.dedup();
    let s = roots_of_unity(q);
    let mut s_prime = SingularSet::default();
    for &nu in orders {
        s_prime = s_prime.union(&composed_singulars(&s, nu)?);
    }
    Ok(CompositionLevels { per_polynomial: per, levels, s_prime })
}
