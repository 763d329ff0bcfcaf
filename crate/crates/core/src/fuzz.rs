//! Seeded fuzzing of the inequality checks.
//!
//! Trial `i` of a run with master seed `S` uses the trial seed `S + i`
//! (wrapping); everything about the trial is drawn from a ChaCha stream keyed
//! by that seed alone, so `--trials 1 --seed <trial seed>` replays it.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::function::{
    random_bounded_function, random_smooth_function, GeneratorError, RealFunction,
};
use crate::inequality::{
    BoundingQuadruple, ConstantBounds, HolderPair, InequalityChecker, InequalityError,
    InequalityReport, TheoremId, Tolerance, DEFAULT_SAMPLES,
};
use crate::operator::{EvalPoint, DEFAULT_NODES};
use crate::special::PositiveReal;

pub const CSV_HEADER: [&str; 12] = [
    "theorem", "alpha", "beta", "t", "p", "q", "seed", "lhs", "bound", "ratio", "margin", "pass",
];

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error("invalid fuzz configuration: {0}")]
    Config(String),
    #[error("trial {index} (seed {seed}) could not be evaluated: {source}")]
    Trial {
        index: u64,
        seed: u64,
        #[source]
        source: InequalityError,
    },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("failed to write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Closed interval `[lo, hi]`; `lo == hi` pins the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.gen_range(self.lo..=self.hi)
        }
    }
}

/// Which kinds of trial functions to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Family {
    /// Per-trial mix of all kinds below.
    #[default]
    Mixed,
    /// Constants with tight envelopes (equality cases).
    Tight,
    /// Constants with loose envelopes.
    Constant,
    /// Single polynomials in `ln τ`, rescaled to stay inside their range.
    Smooth,
    /// Piecewise polynomials in `ln τ` (clipped, kinked).
    Piecewise,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mixed => "mixed",
            Self::Tight => "tight",
            Self::Constant => "constant",
            Self::Smooth => "smooth",
            Self::Piecewise => "piecewise",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Self::Mixed,
            Self::Tight,
            Self::Constant,
            Self::Smooth,
            Self::Piecewise,
        ]
        .into_iter()
        .find(|f| f.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| {
            format!("unknown family `{s}`; expected mixed, tight, constant, smooth or piecewise")
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub theorem: TheoremId,
    pub trials: u64,
    pub master_seed: u64,
    pub alpha_range: Interval,
    pub beta_range: Interval,
    pub t_range: Interval,
    /// Range for `p` (T34, YOUNG) or `r` (POWMEAN).
    pub p_range: Interval,
    pub nodes: usize,
    pub tolerance: Tolerance,
    pub family: Family,
}

impl FuzzConfig {
    pub fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            trials: 1000,
            master_seed: 1,
            alpha_range: Interval::new(0.1, 5.0),
            beta_range: Interval::new(0.1, 5.0),
            t_range: Interval::new(1.1, 10.0),
            p_range: Interval::new(1.1, 4.0),
            nodes: DEFAULT_NODES,
            tolerance: Tolerance::default(),
            family: Family::Mixed,
        }
    }

    pub fn validate(&self) -> Result<(), FuzzError> {
        let bad = |msg: String| Err(FuzzError::Config(msg));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        for (name, r, min) in [
            ("alpha", self.alpha_range, 0.0),
            ("beta", self.beta_range, 0.0),
            ("t", self.t_range, 1.0),
            ("p", self.p_range, 1.0),
        ] {
            if !r.is_valid() || r.lo <= min {
                return bad(format!(
                    "{name} range [{}, {}] must be nonempty with lower end > {min}",
                    r.lo, r.hi
                ));
            }
        }
        if self.nodes < 2 {
            return bad(format!("nodes must be at least 2, got {}", self.nodes));
        }
        if !(self.tolerance.rel >= 0.0 && self.tolerance.abs >= 0.0) {
            return bad("tolerances must be nonnegative".into());
        }
        Ok(())
    }

    pub fn trial_seed(&self, index: u64) -> u64 {
        self.master_seed.wrapping_add(index)
    }

    /// Command line that replays the trial with `seed` in isolation.
    pub fn reproducer(&self, seed: u64) -> String {
        format!(
            "hadafrac fuzz --theorem {} --trials 1 --seed {seed} --nodes {} --rel-tol {:e} --abs-tol {:e} \
             --alpha-min {} --alpha-max {} --beta-min {} --beta-max {} --t-min {} --t-max {} \
             --p-min {} --p-max {} --family {}",
            self.theorem,
            self.nodes,
            self.tolerance.rel,
            self.tolerance.abs,
            self.alpha_range.lo,
            self.alpha_range.hi,
            self.beta_range.lo,
            self.beta_range.hi,
            self.t_range.lo,
            self.t_range.hi,
            self.p_range.lo,
            self.p_range.hi,
            self.family,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub report: InequalityReport,
    /// Some trial function has a kink or clip inside `[1, t]`; the relaxed
    /// tolerance was applied.
    pub kinked: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub trials_run: u64,
    pub passes: u64,
    pub failures: u64,
    pub kinked: u64,
    pub worst_ratio: f64,
    pub worst_seed: u64,
    pub wall_time: Duration,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trials={} passes={} failures={} kinked={} worst_ratio={:.15} worst_seed={} wall_time={:.3}s",
            self.trials_run,
            self.passes,
            self.failures,
            self.kinked,
            self.worst_ratio,
            self.worst_seed,
            self.wall_time.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone)]
pub struct FuzzRun {
    pub records: Vec<TrialRecord>,
    pub summary: RunSummary,
}

impl FuzzRun {
    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| !r.report.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Tight,
    Constant,
    Smooth,
    Piecewise,
}

struct TrialBuilder {
    rng: ChaCha8Rng,
    shape: Shape,
    t: f64,
    kinked: bool,
}

impl TrialBuilder {
    fn function(&mut self, lo: f64, hi: f64) -> Result<RealFunction, GeneratorError> {
        let f = match self.shape {
            Shape::Tight | Shape::Constant => RealFunction::Constant(self.rng.gen_range(lo..=hi)),
            Shape::Smooth => {
                let degree = self.rng.gen_range(1..=4);
                random_smooth_function(self.rng.gen(), lo, hi, degree, self.t.ln())?.into()
            }
            Shape::Piecewise => {
                let pieces = self.rng.gen_range(2..=6);
                let degree = self.rng.gen_range(1..=3);
                random_bounded_function(self.rng.gen(), lo, hi, pieces, degree)?
                    .0
                    .into()
            }
        };
        if !f.is_smooth_on(self.t) {
            self.kinked = true;
        }
        Ok(f)
    }

    /// `(x, u1, u2)` with `0 < u1 ≤ x ≤ u2`.
    fn enveloped(&mut self) -> Result<(RealFunction, RealFunction, RealFunction), GeneratorError> {
        if self.shape == Shape::Tight {
            let c = RealFunction::Constant(self.rng.gen_range(0.2..=3.0));
            return Ok((c.clone(), c.clone(), c));
        }
        let u1 = self.function(0.2, 2.0)?;
        let gap_lo = self.function(0.05, 1.0)?;
        let gap_hi = self.function(0.05, 1.0)?;
        let x = RealFunction::sum(u1.clone(), gap_lo);
        let u2 = RealFunction::sum(x.clone(), gap_hi);
        Ok((x, u1, u2))
    }

    /// `(f, lo, hi)` with a constant range `[lo, hi]`.
    fn bounded(&mut self) -> Result<(RealFunction, f64, f64), GeneratorError> {
        let lo = self.rng.gen_range(0.2..=2.0);
        if self.shape == Shape::Tight {
            return Ok((RealFunction::Constant(lo), lo, lo));
        }
        let hi = lo * self.rng.gen_range(1.05..=3.0);
        Ok((self.function(lo, hi)?, lo, hi))
    }
}

fn draw_shape(rng: &mut impl Rng, family: Family) -> Shape {
    match family {
        Family::Tight => Shape::Tight,
        Family::Constant => Shape::Constant,
        Family::Smooth => Shape::Smooth,
        Family::Piecewise => Shape::Piecewise,
        Family::Mixed => match rng.gen_range(0..20) {
            0 => Shape::Tight,
            1 | 2 => Shape::Constant,
            3..=10 => Shape::Smooth,
            _ => Shape::Piecewise,
        },
    }
}

/// Runs one trial from its seed.
pub fn run_trial(cfg: &FuzzConfig, index: u64) -> Result<TrialRecord, FuzzError> {
    let seed = cfg.trial_seed(index);
    let wrap = |source: InequalityError| FuzzError::Trial {
        index,
        seed,
        source,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let alpha = PositiveReal::new(cfg.alpha_range.sample(&mut rng))
        .map_err(|e| wrap(InequalityError::Operator(e.into())))?;
    let beta = PositiveReal::new(cfg.beta_range.sample(&mut rng))
        .map_err(|e| wrap(InequalityError::Operator(e.into())))?;
    let t_value = cfg.t_range.sample(&mut rng);
    let t = EvalPoint::new(t_value).map_err(|e| wrap(e.into()))?;
    let p = cfg.p_range.sample(&mut rng);
    let shape = draw_shape(&mut rng, cfg.family);
    let mut b = TrialBuilder {
        rng,
        shape,
        t: t_value,
        kinked: false,
    };

    let checker = InequalityChecker {
        nodes: cfg.nodes,
        samples: DEFAULT_SAMPLES,
        tolerance: cfg.tolerance,
    };
    let report = match cfg.theorem {
        TheoremId::T31 | TheoremId::T32 | TheoremId::T33 => {
            let (x, u1, u2) = b.enveloped()?;
            let (y, v1, v2) = b.enveloped()?;
            let env = BoundingQuadruple::new(u1, u2, v1, v2);
            match cfg.theorem {
                TheoremId::T31 => checker.polya_szego_single(&x, &y, &env, alpha, t),
                TheoremId::T32 => checker.polya_szego_double(&x, &y, &env, alpha, beta, t),
                _ => checker.product_bound(&x, &y, &env, alpha, beta, t),
            }
        }
        TheoremId::P31 | TheoremId::P32 | TheoremId::P33 => {
            let (x, m, big_m) = b.bounded()?;
            let (y, n, big_n) = b.bounded()?;
            let cb = ConstantBounds::new(m, big_m, n, big_n).map_err(wrap)?;
            match cfg.theorem {
                TheoremId::P31 => checker.constant_polya_szego(&x, &y, &cb, alpha, t),
                TheoremId::P32 => {
                    checker.constant_polya_szego_two_order(&x, &y, &cb, alpha, beta, t)
                }
                _ => checker.ratio_bound_constant(&x, &y, &cb, alpha, beta, t),
            }
        }
        TheoremId::T34 => {
            let hp = HolderPair::from_p(p).map_err(wrap)?;
            let m = b.rng.gen_range(0.1..=1.0);
            let big_m = m * b.rng.gen_range(1.5..=5.0);
            let margin = 0.05 * (big_m - m);
            let y = b.function(0.2, 3.0)?;
            let ratio = b.function(m + margin, big_m - margin)?;
            let x = RealFunction::product(ratio, y.clone());
            checker.minkowsky_related(&x, &y, hp, m, big_m, alpha, t)
        }
        TheoremId::Young => {
            let hp = HolderPair::from_p(p).map_err(wrap)?;
            let x = b.function(0.1, 3.0)?;
            let y = match (&x, shape) {
                // x^p = y^q: the equality case of Young's inequality
                (RealFunction::Constant(c), Shape::Tight) => {
                    RealFunction::Constant(c.powf(p - 1.0))
                }
                _ => b.function(0.1, 3.0)?,
            };
            checker.young_pointwise_check(&x, &y, hp, alpha, t)
        }
        TheoremId::PowMean => {
            let x = b.function(0.1, 3.0)?;
            let y = if shape == Shape::Tight {
                x.clone()
            } else {
                b.function(0.1, 3.0)?
            };
            checker.power_mean_check(&x, &y, p, alpha, t)
        }
    };
    let mut report = report.map_err(wrap)?;
    report.seed = Some(seed);
    if b.kinked {
        report.rejudge(cfg.tolerance.for_kinked());
    }
    Ok(TrialRecord {
        index,
        report,
        kinked: b.kinked,
    })
}

/// Runs every trial (in parallel) and returns records in trial order.
pub fn run(cfg: &FuzzConfig) -> Result<FuzzRun, FuzzError> {
    cfg.validate()?;
    let start = Instant::now();
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(&records, start.elapsed());
    Ok(FuzzRun { records, summary })
}

pub fn summarize(records: &[TrialRecord], wall_time: Duration) -> RunSummary {
    let passes = records.iter().filter(|r| r.report.pass).count() as u64;
    let worst = records
        .iter()
        .max_by(|a, b| a.report.ratio.total_cmp(&b.report.ratio))
        .map(|r| (r.report.ratio, r.report.seed.unwrap_or_default()));
    let (worst_ratio, worst_seed) = worst.unwrap_or((f64::NAN, 0));
    RunSummary {
        trials_run: records.len() as u64,
        passes,
        failures: records.len() as u64 - passes,
        kinked: records.iter().filter(|r| r.kinked).count() as u64,
        worst_ratio,
        worst_seed,
        wall_time,
    }
}

/// Round-trip-safe rendering with 17 significant digits.
pub fn csv_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the header and one row per record, LF line endings.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), FuzzError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(csv_number).unwrap_or_default();
    for rec in records {
        let r = &rec.report;
        let beta = if r.theorem.uses_beta() {
            r.params.beta
        } else {
            None
        };
        w.write_record([
            r.theorem.as_str().to_string(),
            csv_number(r.params.alpha),
            opt(beta),
            csv_number(r.params.t),
            opt(r.params.p),
            opt(r.params.q),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            csv_number(r.lhs),
            csv_number(r.bound),
            csv_number(r.ratio),
            csv_number(r.margin),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
