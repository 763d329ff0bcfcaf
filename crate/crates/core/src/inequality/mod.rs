//! Both sides of the fractional Pólya–Szegő, product-bound and
//! Minkowski-type inequalities for the Hadamard integral, evaluated with a
//! shared positive-weight quadrature and returned as [`InequalityReport`]s.
//!
//! Hypotheses (envelopes, constant bounds, ratio bounds, nonnegativity) are
//! checked by sampling: on a geometric grid over `[1, t]` and at every
//! quadrature node in use.

mod checks;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::function::RealFunction;
use crate::operator::{
    build_graded_jacobi_rule, integrate_values, log_eval_points, EvalPoint, OperatorError,
    QuadratureRule, DEFAULT_NODES,
};
use crate::special::PositiveReal;

pub use checks::{two_order_prefactor_explicit, MinkowskiChain};

pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
/// Relative tolerance applied to trials whose functions have kinks.
pub const KINKED_REL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Single-order Pólya–Szegő with function envelopes.
    T31,
    /// Two-order Pólya–Szegő with function envelopes.
    T32,
    /// Product bound with function envelopes.
    T33,
    /// Single-order Pólya–Szegő with constant bounds.
    P31,
    /// Two-order Pólya–Szegő with constant bounds.
    P32,
    /// Product bound with constant bounds.
    P33,
    /// Minkowski-type bound under a ratio constraint.
    T34,
    /// Integrated Young inequality.
    Young,
    /// Integrated power-mean inequality.
    PowMean,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        Self::T31,
        Self::T32,
        Self::T33,
        Self::P31,
        Self::P32,
        Self::P33,
        Self::T34,
        Self::Young,
        Self::PowMean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::T31 => "T31",
            Self::T32 => "T32",
            Self::T33 => "T33",
            Self::P31 => "P31",
            Self::P32 => "P32",
            Self::P33 => "P33",
            Self::T34 => "T34",
            Self::Young => "YOUNG",
            Self::PowMean => "POWMEAN",
        }
    }

    /// Whether the check involves a second order `β`.
    pub fn uses_beta(self) -> bool {
        matches!(self, Self::T32 | Self::T33 | Self::P32 | Self::P33)
    }

    /// Whether the check involves an exponent (`p`, `q` or `r`).
    pub fn uses_exponent(self) -> bool {
        matches!(self, Self::T34 | Self::Young | Self::PowMean)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown check `{s}`; expected one of T31, T32, T33, P31, P32, P33, T34, YOUNG, POWMEAN"))
    }
}

/// `pass ⇔ lhs ≤ bound·(1 + rel) + abs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: DEFAULT_REL_TOL,
            abs: DEFAULT_ABS_TOL,
        }
    }
}

impl Tolerance {
    pub fn accepts(&self, lhs: f64, bound: f64) -> bool {
        lhs <= bound * (1.0 + self.rel) + self.abs
    }

    /// The same tolerance, loosened to [`KINKED_REL_TOL`] if it is tighter.
    pub fn for_kinked(self) -> Self {
        Self {
            rel: self.rel.max(KINKED_REL_TOL),
            abs: self.abs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReportParams {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub t: f64,
    pub p: Option<f64>,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub bound: f64,
    pub ratio: f64,
    pub margin: f64,
    pub pass: bool,
    pub params: ReportParams,
    pub seed: Option<u64>,
}

impl InequalityReport {
    pub fn new(
        theorem: TheoremId,
        lhs: f64,
        bound: f64,
        params: ReportParams,
        tolerance: Tolerance,
    ) -> Self {
        let ratio = if bound != 0.0 {
            lhs / bound
        } else if lhs == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
        Self {
            theorem,
            lhs,
            bound,
            ratio,
            margin: bound - lhs,
            pass: tolerance.accepts(lhs, bound),
            params,
            seed: None,
        }
    }

    /// Re-judges `pass` under a different tolerance.
    pub fn rejudge(&mut self, tolerance: Tolerance) {
        self.pass = tolerance.accepts(self.lhs, self.bound);
    }
}

/// Envelope functions `u1 ≤ x ≤ u2`, `v1 ≤ y ≤ v2`, all strictly positive.
#[derive(Debug, Clone)]
pub struct BoundingQuadruple {
    pub u1: RealFunction,
    pub u2: RealFunction,
    pub v1: RealFunction,
    pub v2: RealFunction,
}

impl BoundingQuadruple {
    pub fn new(u1: RealFunction, u2: RealFunction, v1: RealFunction, v2: RealFunction) -> Self {
        Self { u1, u2, v1, v2 }
    }

    pub fn constant(u1: f64, u2: f64, v1: f64, v2: f64) -> Self {
        Self::new(u1.into(), u2.into(), v1.into(), v2.into())
    }
}

/// `0 < m ≤ x ≤ M` and `0 < n ≤ y ≤ N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantBounds {
    m: f64,
    big_m: f64,
    n: f64,
    big_n: f64,
}

impl ConstantBounds {
    pub fn new(m: f64, big_m: f64, n: f64, big_n: f64) -> Result<Self, InequalityError> {
        let ok = |lo: f64, hi: f64| lo > 0.0 && lo <= hi && hi.is_finite();
        if !(ok(m, big_m) && ok(n, big_n)) {
            return Err(InequalityError::Parameter(format!(
                "constant bounds need 0 < m <= M < inf and 0 < n <= N < inf, got ({m}, {big_m}, {n}, {big_n})"
            )));
        }
        Ok(Self { m, big_m, n, big_n })
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        (self.m, self.big_m)
    }

    pub fn y_bounds(&self) -> (f64, f64) {
        (self.n, self.big_n)
    }

    /// `¼ (√(mn/MN) + √(MN/mn))²`.
    pub fn polya_szego_constant(&self) -> f64 {
        let r = (self.m * self.n / (self.big_m * self.big_n)).sqrt();
        0.25 * (r + 1.0 / r).powi(2)
    }

    /// `MN / (mn)`.
    pub fn spread(&self) -> f64 {
        self.big_m * self.big_n / (self.m * self.n)
    }
}

/// Conjugate exponents, `1/p + 1/q = 1` with `p, q > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPair {
    p: f64,
    q: f64,
}

impl HolderPair {
    pub fn new(p: f64, q: f64) -> Result<Self, InequalityError> {
        if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite())
            || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12
        {
            return Err(InequalityError::Parameter(format!(
                "({p}, {q}) is not a conjugate pair with p, q > 1"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn from_p(p: f64) -> Result<Self, InequalityError> {
        Self::new(p, p / (p - 1.0))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InequalityError {
    #[error("hypothesis violated at x = {tau}: {what}")]
    Hypothesis { what: String, tau: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

impl From<crate::function::EvalError> for InequalityError {
    fn from(e: crate::function::EvalError) -> Self {
        Self::Operator(e.into())
    }
}

/// True iff `lo(τ) ≤ f(τ) ≤ hi(τ)` and `lo(τ) > 0` at `samples` points
/// geometrically spaced over `[1, t]`. Evaluation failures count as
/// violations.
pub fn verify_envelope(
    f: &RealFunction,
    lo: &RealFunction,
    hi: &RealFunction,
    t: EvalPoint,
    samples: usize,
) -> bool {
    let grid = geometric_grid(t.ln(), samples.max(2));
    first_envelope_violation(f, lo, hi, &grid).is_none()
}

/// `ln τ` for `samples` points `τ_k = t^(k/(samples-1))`.
pub fn geometric_grid(ln_t: f64, samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(|k| ln_t * k as f64 / last).collect()
}

/// First `τ` (given as `ln τ`) where the envelope hypothesis fails.
pub fn first_envelope_violation(
    f: &RealFunction,
    lo: &RealFunction,
    hi: &RealFunction,
    ln_points: &[f64],
) -> Option<f64> {
    ln_points
        .iter()
        .copied()
        .find(|&x| match (lo.eval_ln(x), f.eval_ln(x), hi.eval_ln(x)) {
            (Ok(l), Ok(v), Ok(h)) => !(l > 0.0 && l <= v && v <= h),
            _ => true,
        })
}

/// Evaluation of one quadrature rule at one upper limit.
struct Discretization {
    rule: QuadratureRule,
    ln_t: f64,
    ln_points: Vec<f64>,
}

impl Discretization {
    fn new(alpha: PositiveReal, t: EvalPoint, nodes: usize) -> Result<Self, OperatorError> {
        let rule = build_graded_jacobi_rule(alpha, nodes)?;
        let ln_t = t.ln();
        let ln_points = log_eval_points(&rule, ln_t).collect();
        Ok(Self {
            rule,
            ln_t,
            ln_points,
        })
    }

    fn values(&self, f: &RealFunction) -> Result<Vec<f64>, InequalityError> {
        self.ln_points
            .iter()
            .map(|&x| f.eval_ln(x).map_err(InequalityError::from))
            .collect()
    }

    /// `D^(-α)` of the pointwise integrand built by `g` from node indices.
    fn integral(&self, g: impl Fn(usize) -> f64) -> Result<f64, InequalityError> {
        let values: Vec<f64> = (0..self.rule.len()).map(g).collect();
        Ok(integrate_values(&self.rule, self.ln_t, &values)?)
    }
}

/// Evaluates the inequalities with a fixed node count, sampling density and
/// pass tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityChecker {
    pub nodes: usize,
    pub samples: usize,
    pub tolerance: Tolerance,
}

impl Default for InequalityChecker {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
            samples: DEFAULT_SAMPLES,
            tolerance: Tolerance::default(),
        }
    }
}

impl InequalityChecker {
    pub fn with_tolerance(tolerance: Tolerance) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    fn discretize(
        &self,
        alpha: PositiveReal,
        t: EvalPoint,
    ) -> Result<Discretization, InequalityError> {
        Ok(Discretization::new(alpha, t, self.nodes)?)
    }

    /// Geometric samples plus the nodes of every discretization in use.
    fn check_points(&self, t: EvalPoint, grids: &[&Discretization]) -> Vec<f64> {
        let mut pts = geometric_grid(t.ln(), self.samples.max(2));
        for d in grids {
            pts.extend_from_slice(&d.ln_points);
        }
        pts
    }

    fn require_envelope(
        &self,
        name: &str,
        f: &RealFunction,
        lo: &RealFunction,
        hi: &RealFunction,
        points: &[f64],
    ) -> Result<(), InequalityError> {
        match first_envelope_violation(f, lo, hi, points) {
            None => Ok(()),
            Some(x) => Err(InequalityError::Hypothesis {
                what: format!("{name} leaves its envelope"),
                tau: x.exp(),
            }),
        }
    }

    fn require_nonnegative(
        &self,
        name: &str,
        f: &RealFunction,
        points: &[f64],
    ) -> Result<(), InequalityError> {
        for &x in points {
            let v = f.eval_ln(x)?;
            if !(v >= 0.0) {
                return Err(InequalityError::Hypothesis {
                    what: format!("{name} is negative ({v})"),
                    tau: x.exp(),
                });
            }
        }
        Ok(())
    }
}
