//! Real functions of one variable on `[1, T]`.
//!
//! A [`RealFunction`] is either a leaf (a parsed expression, a power of
//! `ln τ`, a generated piecewise polynomial) or a pointwise sum or product.

mod expr;
mod piecewise;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use expr::{parse_expr, BinaryOp, Expr, ParseError, UnaryOp, MAX_EXPR_LEN};
pub use piecewise::{
    random_bounded_function, random_smooth_function, GeneratorError, PiecewiseLogPoly, LN_SPAN,
    MAX_DEGREE, MAX_PIECES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain fault in `{expr}` at x = {tau}: {reason}")]
    Domain {
        expr: String,
        tau: f64,
        reason: &'static str,
    },
    #[error("evaluation point {tau} is outside the function's domain")]
    OutOfDomain { tau: f64 },
    #[error("function produced a non-finite value at x = {tau}")]
    NonFinite { tau: f64 },
}

/// An evaluatable real function of τ.
///
/// Cloning is cheap; the heavy variants are reference counted.
#[derive(Debug, Clone)]
pub enum RealFunction {
    Constant(f64),
    /// `(ln τ)^exponent`, the family on which the power rules act.
    LnPower(f64),
    Expr(Arc<Expr>),
    LogPoly(Arc<PiecewiseLogPoly>),
    Sum(Arc<RealFunction>, Arc<RealFunction>),
    Product(Arc<RealFunction>, Arc<RealFunction>),
}

impl RealFunction {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_expr(text).map(Self::from)
    }

    pub fn sum(a: RealFunction, b: RealFunction) -> Self {
        Self::Sum(Arc::new(a), Arc::new(b))
    }

    pub fn product(a: RealFunction, b: RealFunction) -> Self {
        Self::Product(Arc::new(a), Arc::new(b))
    }

    pub fn eval(&self, tau: f64) -> Result<f64, EvalError> {
        let v = match self {
            Self::Constant(c) => *c,
            Self::LnPower(p) => {
                if !(tau >= 1.0) {
                    return Err(EvalError::OutOfDomain { tau });
                }
                tau.ln().powf(*p)
            }
            Self::Expr(e) => return e.eval(tau),
            Self::LogPoly(f) => return f.eval(tau),
            Self::Sum(a, b) => a.eval(tau)? + b.eval(tau)?,
            Self::Product(a, b) => a.eval(tau)? * b.eval(tau)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { tau })
        }
    }

    /// Evaluates with `ln τ` given directly; avoids rounding τ to 1 when
    /// `ln τ` is tiny.
    pub fn eval_ln(&self, ln_tau: f64) -> Result<f64, EvalError> {
        match self {
            Self::LnPower(p) => {
                let v = ln_tau.powf(*p);
                if v.is_finite() && ln_tau >= 0.0 {
                    Ok(v)
                } else {
                    Err(EvalError::NonFinite { tau: ln_tau.exp() })
                }
            }
            Self::LogPoly(f) => Ok(f.eval_ln(ln_tau)),
            Self::Sum(a, b) => Ok(a.eval_ln(ln_tau)? + b.eval_ln(ln_tau)?),
            Self::Product(a, b) => {
                let v = a.eval_ln(ln_tau)? * b.eval_ln(ln_tau)?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(EvalError::NonFinite { tau: ln_tau.exp() })
                }
            }
            _ => self.eval(ln_tau.exp()),
        }
    }

    /// True if the function is a constant (no dependence on τ at all).
    pub fn is_constant(&self) -> bool {
        match self {
            Self::Constant(_) => true,
            Self::LnPower(p) => *p == 0.0,
            Self::Expr(e) => e.is_constant(),
            Self::LogPoly(f) => {
                f.coefficients().iter().all(|c| c.len() <= 1) && f.breakpoints().len() == 1
            }
            Self::Sum(a, b) | Self::Product(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// False if some component may have a kink or clip inside `[1, t]`.
    pub fn is_smooth_on(&self, t: f64) -> bool {
        match self {
            Self::LogPoly(f) => f.is_smooth_on(t.ln()),
            Self::Sum(a, b) | Self::Product(a, b) => a.is_smooth_on(t) && b.is_smooth_on(t),
            Self::Expr(e) => !contains_abs(e),
            _ => true,
        }
    }
}

fn contains_abs(e: &Expr) -> bool {
    match e {
        Expr::Const(_) | Expr::Var => false,
        Expr::Unary(UnaryOp::Abs, _) => true,
        Expr::Unary(_, a) => contains_abs(a),
        Expr::Binary(_, a, b) => contains_abs(a) || contains_abs(b),
    }
}

impl From<Expr> for RealFunction {
    fn from(e: Expr) -> Self {
        match e {
            Expr::Const(c) => Self::Constant(c),
            e => Self::Expr(Arc::new(e)),
        }
    }
}

impl From<PiecewiseLogPoly> for RealFunction {
    fn from(f: PiecewiseLogPoly) -> Self {
        Self::LogPoly(Arc::new(f))
    }
}

impl From<f64> for RealFunction {
    fn from(c: f64) -> Self {
        Self::Constant(c)
    }
}

impl fmt::Display for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "{c}"),
            Self::LnPower(p) => write!(f, "ln(x)^{p}"),
            Self::Expr(e) => write!(f, "{e}"),
            Self::LogPoly(p) => write!(f, "logpoly[{} pieces]", p.breakpoints().len()),
            Self::Sum(a, b) => write!(f, "({a} + {b})"),
            Self::Product(a, b) => write!(f, "({a} * {b})"),
        }
    }
}
