//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's quadrature or Gamma code: the
//! Gamma function comes from a shifted Stirling series and the Hadamard
//! integral from double-exponential (tanh-sinh) quadrature in the variable
//! `w = (ln(t/τ) / ln t)^α`, where the kernel becomes the constant
//! `(ln t)^α / α` and only an integrable endpoint singularity remains.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Γ(z) for z > 0 by upward shift to z ≥ 12 and the Stirling series.
pub fn gamma(z: f64) -> f64 {
    assert!(z > 0.0);
    let mut z = z;
    let mut shift = 1.0;
    while z < 12.0 {
        shift *= z;
        z += 1.0;
    }
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let series = zi
        * (1.0 / 12.0
            + zi2
                * (-1.0 / 360.0
                    + zi2
                        * (1.0 / 1260.0
                            + zi2
                                * (-1.0 / 1680.0
                                    + zi2
                                        * (1.0 / 1188.0
                                            + zi2 * (-691.0 / 360360.0 + zi2 / 156.0))))));
    // split z^(z - 1/2) e^(-z) in halves so neither factor overflows
    let half = z.powf(0.5 * (z - 0.5)) * (-0.5 * z).exp();
    half * half * series.exp() * (2.0 * PI).sqrt() / shift
}

/// ∫_0^1 g(w) dw by tanh-sinh, refining the step until two levels agree.
///
/// `g` receives `(w, 1 - w)` so integrands can use whichever is accurate.
pub fn tanh_sinh(g: impl Fn(f64, f64) -> f64) -> f64 {
    let term = |s: f64| -> f64 {
        let e = (PI * s.sinh()).exp();
        let w = e / (1.0 + e);
        let wc = 1.0 / (1.0 + e);
        let ch = (0.5 * PI * s.sinh()).cosh();
        let dw = 0.25 * PI * s.cosh() / (ch * ch);
        if !(w > 0.0 && wc > 0.0) || dw == 0.0 {
            return 0.0;
        }
        g(w, wc) * dw
    };
    let limit = 4.0;
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1.0;
    while k * h <= limit {
        sum += term(k * h) + term(-k * h);
        k += 1.0;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        // only the odd multiples of the new step are new points
        let mut j = 1.0;
        while j * h <= limit {
            sum += term(j * h) + term(-j * h);
            j += 2.0;
        }
        let next = sum * h;
        if (next - prev).abs() <= 1e-15 * next.abs().max(1e-300) {
            return next;
        }
        prev = next;
    }
    prev
}

/// D^(-α) f(t) with `f` given as a function of `ln τ`.
pub fn hadamard_ln(f: impl Fn(f64) -> f64, alpha: f64, t: f64) -> f64 {
    let l = t.ln();
    let inner = tanh_sinh(|w, _| f(l * (1.0 - w.powf(1.0 / alpha))));
    l.powf(alpha) / (alpha * gamma(alpha)) * inner
}

/// D^(-α) f(t) with `f` given as a function of `τ`.
pub fn hadamard(f: impl Fn(f64) -> f64, alpha: f64, t: f64) -> f64 {
    hadamard_ln(|s| f(s.exp()), alpha, t)
}

/// Closed-form power rule computed with the oracle Gamma.
pub fn power_rule(beta: f64, alpha: f64, t: f64) -> f64 {
    gamma(beta) / gamma(beta + alpha) * t.ln().powf(beta + alpha - 1.0)
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// A seeded smooth (analytic) integrand in `ln x`, as DSL text.
///
/// Mixes a polynomial, an exponential and an oscillation with coefficients
/// chosen so the function stays within roughly `[0.1, 10]` for `x ≤ 20`;
/// keeping it away from zero makes relative comparisons meaningful.
pub fn smooth_expr(seed: u64) -> String {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    format!(
        "{:.6} + {:.6}*ln(x) + {:.6}*ln(x)^2 + {:.6}*exp({:.6}*ln(x)) + {:.6}*sin({:.6}*ln(x) + {:.6})",
        u(1.5, 2.5),
        u(-0.3, 0.3),
        u(0.0, 0.3),
        u(0.0, 1.0),
        u(-1.0, 0.7),
        u(-0.5, 0.5),
        u(-2.0, 2.0),
        u(-1.0, 1.0)
    )
}
