//! Gauss–Jacobi rules for the weight `s^(α-1)` on `[0, 1]`.
//!
//! Nodes are the zeros of the Jacobi polynomial `P_n^(0, α-1)` on `[-1, 1]`,
//! found by Newton iteration on the three-term recurrence. Roots already
//! found are deflated out, which keeps the iteration from converging twice
//! to the same zero when the initial guesses are poor (large `α`).

use thiserror::Error;

use crate::special::PositiveReal;

const MAX_NEWTON_ITERS: usize = 100;
/// Relative step size after which two more Newton steps are taken and the
/// iteration stops; rounding noise in `P_n` sits near 1e-14 relative.
const NEWTON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("a quadrature rule needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("Newton iteration for node {index} of the {n}-point rule (alpha = {alpha}) did not converge")]
    NoConvergence { alpha: f64, n: usize, index: usize },
    #[error("{n}-point rule for alpha = {alpha} is degenerate: {reason}")]
    Degenerate {
        alpha: f64,
        n: usize,
        reason: &'static str,
    },
}

/// How the Gauss–Jacobi nodes are placed on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// Plain Gauss–Jacobi: `s = v`.
    None,
    /// `s = 1 - (1 - v)^2`: clusters nodes at `s = 1`, where integrands of
    /// the form `(1 - s)^μ` (functions like `(ln τ)^μ` near `τ = 1`) are
    /// not smooth. The factor `s^(α-1)` is still absorbed exactly at `s = 0`.
    Quadratic,
}

/// Node/weight pairs for `∫_0^1 s^(α-1) g(s) ds ≈ Σ w_i g(s_i)`.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    alpha: PositiveReal,
    nodes: Vec<f64>,
    /// `1 - s_i`, computed without cancellation.
    complements: Vec<f64>,
    weights: Vec<f64>,
    grading: Grading,
}

impl QuadratureRule {
    pub fn alpha(&self) -> PositiveReal {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn complements(&self) -> &[f64] {
        &self.complements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    /// Same construction with a different node count.
    pub fn with_len(&self, n: usize) -> Result<QuadratureRule, QuadratureError> {
        build_rule(self.alpha, n, self.grading)
    }

    /// `Σ w_i g(s_i)`.
    pub fn apply(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * g(s))
            .sum()
    }
}

/// Plain Gauss–Jacobi rule: exact for polynomials of degree `<= 2n - 1`
/// against the weight `s^(α-1)`.
pub fn build_jacobi_rule(alpha: PositiveReal, n: usize) -> Result<QuadratureRule, QuadratureError> {
    build_rule(alpha, n, Grading::None)
}

/// Gauss–Jacobi rule composed with the quadratic grading map toward `s = 1`.
/// This is the rule the Hadamard operators use by default.
pub fn build_graded_jacobi_rule(
    alpha: PositiveReal,
    n: usize,
) -> Result<QuadratureRule, QuadratureError> {
    build_rule(alpha, n, Grading::Quadratic)
}

pub fn build_rule(
    alpha: PositiveReal,
    n: usize,
    grading: Grading,
) -> Result<QuadratureRule, QuadratureError> {
    if n < 2 {
        return Err(QuadratureError::TooFewNodes(n));
    }
    let a = alpha.get();
    let b = a - 1.0;
    let roots = jacobi_roots(n, b).map_err(|index| QuadratureError::NoConvergence {
        alpha: a,
        n,
        index,
    })?;

    let mut nodes = Vec::with_capacity(n);
    let mut complements = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // roots come out descending in x; emit ascending in s
    for &(v, dp) in roots.iter().rev() {
        let cv = 1.0 - v;
        // with Jacobi parameter a = 0 the Gamma-ratio normalisation is 1 and
        // the 2^(-α) from mapping [-1, 1] to [0, 1] cancels the 2^(b + 1)
        let wv = 1.0 / (4.0 * v * cv * dp * dp);
        match grading {
            Grading::None => {
                nodes.push(v);
                complements.push(cv);
                weights.push(wv);
            }
            Grading::Quadratic => {
                let c = cv * cv;
                let s = v * (2.0 - v);
                nodes.push(s);
                complements.push(c);
                weights.push(wv * (2.0 - v).powf(b) * 2.0 * cv);
            }
        }
    }

    if grading == Grading::Quadratic {
        // The graded weights integrate constants only approximately for small
        // n; rescaling makes the zeroth moment exact without changing the
        // convergence order for anything else.
        let sum: f64 = weights.iter().sum();
        let scale = 1.0 / (a * sum);
        weights.iter_mut().for_each(|w| *w *= scale);
    }

    let degenerate = |reason| QuadratureError::Degenerate {
        alpha: a,
        n,
        reason,
    };
    if nodes.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(degenerate("node outside (0, 1)"));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(degenerate("nodes not strictly increasing"));
    }
    if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(degenerate("nonpositive weight"));
    }

    Ok(QuadratureRule {
        alpha,
        nodes,
        complements,
        weights,
        grading,
    })
}

/// `(P_n, dP_n/dx)` for Jacobi parameters `(0, b)` at `x = 2v - 1`.
///
/// Written in terms of `v = (1 + x) / 2` so that zeros close to `x = -1`,
/// which carry most of the weight when `α` is small, are resolved to full
/// relative precision in `v`.
fn jacobi_eval(n: usize, b: f64, v: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = (b + 2.0) * v - (b + 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + b;
        let a1 = 2.0 * k * (k + b) * (c - 2.0);
        let a2 = -(c - 1.0) * b * b;
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k - 1.0) * (k + b - 1.0) * c;
        let next = (((a2 - a3) + 2.0 * a3 * v) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let c = 2.0 * nf + b;
    let one_minus_x2 = 4.0 * v * (1.0 - v);
    let dp = (nf * (c - b - 2.0 * c * v) * p + 2.0 * nf * (nf + b) * p_prev) / (c * one_minus_x2);
    (p, dp)
}

/// Below this value of `n² v` the zeros are located with the hypergeometric
/// series instead of the recurrence.
const SERIES_THRESHOLD: f64 = 8.0;

/// `C = P_n^(0, b)(-1)` up to sign, i.e. `Γ(n + b + 1) / (Γ(b + 1) n!)`.
fn endpoint_value(n: usize, b: f64) -> f64 {
    (1..=n).map(|k| (k as f64 + b) / k as f64).product()
}

/// `(F, dF/dv)` for `F(v) = 2F1(-n, n + b + 1; b + 1; v)`, so that
/// `P_n^(0, b)(x) = (-1)^n C F(v)`. The recurrence loses relative accuracy
/// in the zeros nearest `x = -1`; the series does not while `n² v` is small.
fn jacobi_series(n: usize, b: f64, v: f64) -> (f64, f64) {
    let nf = n as f64;
    let mut term = 1.0;
    let mut f = 1.0;
    let mut df = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        term *= (kf - 1.0 - nf) * (nf + b + kf) / ((b + kf) * kf) * v;
        f += term;
        df += kf * term / v;
        if term.abs() < 1e-18 * f.abs() && k > 3 {
            break;
        }
    }
    (f, df)
}

/// Zeros of `P_n^(0, b)` as `v = (1 + x) / 2`, in descending order, each
/// paired with `dP_n/dx` there.
fn jacobi_roots(n: usize, b: f64) -> Result<Vec<(f64, f64)>, usize> {
    let mut roots: Vec<(f64, f64)> = Vec::with_capacity(n);
    let denom = 4.0 * n as f64 + 2.0 * b + 2.0;
    let n2 = (n * n) as f64;
    let scale = endpoint_value(n, b);
    // p / (dp/dv) and dp/dx, from whichever representation is accurate at v
    let newton = |v: f64| -> (f64, f64) {
        if n2 * v < SERIES_THRESHOLD {
            let (f, df) = jacobi_series(n, b, v);
            (f / df, 0.5 * scale * df)
        } else {
            let (p, dpdx) = jacobi_eval(n, b, v);
            (p / (2.0 * dpdx), dpdx)
        }
    };
    // a quantity with the sign of P_n at v
    let value = |v: f64| -> f64 {
        if n2 * v < SERIES_THRESHOLD {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * jacobi_series(n, b, v).0
        } else {
            jacobi_eval(n, b, v).0
        }
    };
    for k in 1..=n {
        // Chebyshev-type asymptotic guess for the k-th largest zero,
        // x = cos θ  =>  v = cos²(θ/2).
        let half_theta = 0.5 * std::f64::consts::PI * (4.0 * k as f64 - 1.0) / denom;
        let mut v = half_theta.cos().powi(2);
        if let Some(&(prev, _)) = roots.last() {
            if v >= prev {
                v = 0.5 * prev;
            }
        }
        let mut converged = false;
        let mut polish = 0;
        for _ in 0..MAX_NEWTON_ITERS {
            let (ratio, _) = newton(v);
            let deflate: f64 = roots.iter().map(|&(r, _)| 1.0 / (v - r)).sum();
            let step = ratio / (1.0 - ratio * deflate);
            if !step.is_finite() {
                break;
            }
            // a step out of (0, 1) bisects toward the boundary it crossed; the
            // asymptotic guesses are poor for large α and an undamped step can
            // land on v = 1, where the iteration stalls
            let next = v - step;
            v = if next >= 1.0 {
                0.5 * (v + 1.0)
            } else if next <= 0.0 {
                0.5 * v
            } else {
                next
            };
            if polish > 0 || step.abs() <= NEWTON_TOL * v {
                polish += 1;
                if polish == 3 {
                    converged = true;
                    break;
                }
            }
        }
        if !converged {
            let upper = roots.last().map_or(1.0, |&(r, _)| r);
            v = bracketed_root(n, upper, &value, &newton).ok_or(k - 1)?;
        }
        let (_, dpdx) = newton(v);
        roots.push((v, dpdx));
    }
    roots.sort_by(|l, r| r.0.total_cmp(&l.0));
    Ok(roots)
}

/// Fallback for when deflated Newton wanders off: the largest zero below
/// `upper` is bracketed by a sign scan in `θ` (zeros are about `π/n` apart,
/// the scan uses steps eight times finer) and then refined by Newton steps
/// that fall back to bisection whenever they would leave the bracket.
fn bracketed_root(
    n: usize,
    upper: f64,
    value: &impl Fn(f64) -> f64,
    newton: &impl Fn(f64) -> (f64, f64),
) -> Option<f64> {
    let theta_of = |v: f64| 2.0 * v.sqrt().clamp(0.0, 1.0).acos();
    let v_of = |theta: f64| (0.5 * theta).cos().powi(2);
    let step = std::f64::consts::PI / (8.0 * n as f64);
    let theta_top = theta_of(upper);
    // start just below the previous zero so its own sign change is excluded
    let mut hi = v_of(theta_top + 1e-3 * step);
    let mut f_hi = value(hi);
    let mut theta = theta_top + step;
    let mut lo = loop {
        if theta >= std::f64::consts::PI {
            let v = f64::MIN_POSITIVE;
            if value(v).signum() != f_hi.signum() {
                break v;
            }
            return None;
        }
        let v = v_of(theta);
        let f = value(v);
        if f.signum() != f_hi.signum() {
            break v;
        }
        hi = v;
        f_hi = f;
        theta += step;
    };
    let mut v = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (ratio, _) = newton(v);
        let next = v - ratio;
        let next = if next > lo && next < hi && ratio.is_finite() {
            next
        } else {
            0.5 * (lo + hi)
        };
        if (next - v).abs() <= 1e-15 * next {
            return Some(next);
        }
        v = next;
        if value(v).signum() == f_hi.signum() {
            hi = v;
        } else {
            lo = v;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Some(0.5 * (lo + hi));
        }
    }
    None
}
