//! Gamma function for positive real arguments.
//!
//! Lanczos approximation with g = 7 and nine coefficients, valid for
//! `z >= 0.5`; smaller arguments are shifted up with `Γ(z) = Γ(z + 1) / z`.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

/// Largest argument accepted by [`gamma`]; Γ(171.62) overflows `f64`.
pub const GAMMA_MAX_ARG: f64 = 170.0;

const LANCZOS_G: f64 = 7.0;
// published coefficients, kept digit for digit
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("value {0} must be strictly positive and finite")]
    NotPositive(f64),
    #[error("gamma argument {0} is outside (0, {max}]", max = GAMMA_MAX_ARG)]
    GammaArgument(f64),
}

/// A strictly positive, finite real number (fractional orders, gamma arguments).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self, DomainError> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(DomainError::NotPositive(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = DomainError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<PositiveReal> for f64 {
    fn from(value: PositiveReal) -> f64 {
        value.0
    }
}

impl fmt::Display for PositiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Γ(z) for `0 < z <= 170`.
pub fn gamma(z: f64) -> Result<f64, DomainError> {
    if !(z > 0.0 && z <= GAMMA_MAX_ARG) {
        return Err(DomainError::GammaArgument(z));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        return lanczos(z + 1.0) / z;
    }
    lanczos(z)
}

fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z + 1/2) overflows long before Γ does; split the power in two halves.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * series
}
