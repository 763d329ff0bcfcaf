//! Seeded random bounded functions for fuzzing.
//!
//! Functions are piecewise polynomials in `ln τ`, continuous at their
//! breakpoints and clipped into `[clip_lo, clip_hi]`, so constant envelopes
//! at the clip levels hold by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{EvalError, RealFunction};

/// Breakpoints are drawn from `[0, LN_SPAN)` in `ln τ`, i.e. τ up to about 20.
pub const LN_SPAN: f64 = 3.0;
pub const MAX_PIECES: usize = 16;
pub const MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("bounds must satisfy 0 < lo < hi, got lo = {lo}, hi = {hi}")]
    Bounds { lo: f64, hi: f64 },
    #[error("pieces must be in 1..={MAX_PIECES}, got {0}")]
    Pieces(usize),
    #[error("degree must be in 0..={MAX_DEGREE}, got {0}")]
    Degree(usize),
    #[error("span in ln τ must be positive and finite, got {0}")]
    Span(f64),
}

/// Piecewise polynomial in `ln τ` with clipping.
///
/// Piece `j` covers `ln τ ∈ [s_j, s_{j+1})` and stores coefficients of the
/// local variable `ln τ - s_j`, lowest order first. The last piece extends
/// to infinity and the first one also covers `ln τ < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLogPoly {
    breakpoints: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
    clip_lo: f64,
    clip_hi: f64,
}

impl PiecewiseLogPoly {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn clip_bounds(&self) -> (f64, f64) {
        (self.clip_lo, self.clip_hi)
    }

    fn piece_index(&self, ln_tau: f64) -> usize {
        // breakpoints[0] == 0 and values below it fall into piece 0
        self.breakpoints
            .partition_point(|&s| s <= ln_tau)
            .saturating_sub(1)
    }

    fn eval_piece(&self, j: usize, ln_tau: f64) -> f64 {
        let local = ln_tau - self.breakpoints[j];
        self.coeffs[j]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * local + c)
    }

    /// Value before clipping, as a function of `ln τ`.
    pub fn unclipped_ln(&self, ln_tau: f64) -> f64 {
        self.eval_piece(self.piece_index(ln_tau), ln_tau)
    }

    pub fn eval_ln(&self, ln_tau: f64) -> f64 {
        self.unclipped_ln(ln_tau).clamp(self.clip_lo, self.clip_hi)
    }

    pub fn eval(&self, tau: f64) -> Result<f64, EvalError> {
        if !(tau > 0.0) {
            return Err(EvalError::OutOfDomain { tau });
        }
        Ok(self.eval_ln(tau.ln()))
    }

    /// True when the function is a single polynomial on `ln τ ∈ [0, ln_t]`
    /// that never touches a clip level there (checked on a dense grid).
    pub fn is_smooth_on(&self, ln_t: f64) -> bool {
        if self.breakpoints.iter().skip(1).any(|&s| s < ln_t) {
            return false;
        }
        if self.coeffs[0].len() <= 1 {
            return true;
        }
        const GRID: usize = 512;
        (0..=GRID).all(|k| {
            let v = self.unclipped_ln(ln_t * k as f64 / GRID as f64);
            v > self.clip_lo && v < self.clip_hi
        })
    }
}

/// Draws a random continuous piecewise polynomial in `ln τ` clipped into
/// `[lo, hi]`, together with the constant envelopes `lo` and `hi`.
///
/// The result depends only on the arguments; the same seed always yields a
/// bit-identical function.
pub fn random_bounded_function(
    seed: u64,
    lo: f64,
    hi: f64,
    pieces: usize,
    degree: usize,
) -> Result<(PiecewiseLogPoly, RealFunction, RealFunction), GeneratorError> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(GeneratorError::Bounds { lo, hi });
    }
    if !(1..=MAX_PIECES).contains(&pieces) {
        return Err(GeneratorError::Pieces(pieces));
    }
    if degree > MAX_DEGREE {
        return Err(GeneratorError::Degree(degree));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = hi - lo;

    let mut breakpoints = Vec::with_capacity(pieces);
    breakpoints.push(0.0);
    let mut interior: Vec<f64> = (1..pieces).map(|_| rng.gen_range(0.0..LN_SPAN)).collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    // a zero draw would collide with the first breakpoint
    breakpoints.extend(interior.into_iter().filter(|&s| s > 0.0));

    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(breakpoints.len());
    for j in 0..breakpoints.len() {
        let c0 = if j == 0 {
            rng.gen_range(lo..=hi)
        } else {
            let prev = &coeffs[j - 1];
            let local = breakpoints[j] - breakpoints[j - 1];
            prev.iter().rev().fold(0.0, |acc, c| acc * local + c)
        };
        let mut piece = Vec::with_capacity(degree + 1);
        piece.push(c0);
        for k in 1..=degree {
            // Amplitudes sized so that a sizeable fraction of draws hit a clip level.
            let scale = 1.5 * width / LN_SPAN.powi(k as i32);
            piece.push(rng.gen_range(-scale..=scale));
        }
        coeffs.push(piece);
    }

    let poly = PiecewiseLogPoly {
        breakpoints,
        coeffs,
        clip_lo: lo,
        clip_hi: hi,
    };
    Ok((poly, RealFunction::Constant(lo), RealFunction::Constant(hi)))
}

/// Draws a single random polynomial in `ln τ` and rescales it affinely so
/// its range over `ln τ ∈ [0, ln_t]` fills the middle 90% of `[lo, hi]`.
///
/// Unlike [`random_bounded_function`] the result is never clipped on
/// `[1, t]`, so it is smooth there. The clip levels stay at `lo` and `hi` as
/// a safety net.
pub fn random_smooth_function(
    seed: u64,
    lo: f64,
    hi: f64,
    degree: usize,
    ln_t: f64,
) -> Result<PiecewiseLogPoly, GeneratorError> {
    let (mut poly, _, _) = random_bounded_function(seed, lo, hi, 1, degree)?;
    if !(ln_t > 0.0 && ln_t.is_finite()) {
        return Err(GeneratorError::Span(ln_t));
    }
    const GRID: usize = 1024;
    let (min, max) = (0..=GRID)
        .map(|k| poly.unclipped_ln(ln_t * k as f64 / GRID as f64))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    let width = hi - lo;
    if max - min > 1e-12 * width {
        let scale = 0.9 * width / (max - min);
        let shift = lo + 0.05 * width - scale * min;
        let piece = &mut poly.coeffs[0];
        piece.iter_mut().for_each(|c| *c *= scale);
        piece[0] += shift;
    }
    Ok(poly)
}
