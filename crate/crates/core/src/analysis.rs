//! The occupation curve `n(phi) = 1/(e^phi - 1)` over the dimensionless
//! energy `phi = beta * E`, its two regimes, and the leading-digit
//! consequence of the power-law tail.
//!
//! On a log-log plot the curve has local slope
//!
//! ```text
//! s(phi) = d ln n / d ln phi = -phi e^phi / (e^phi - 1) = -phi (1 + n)
//! ```
//!
//! which tends to -1 as `phi -> 0` (the power-law tail, `n ~ 1/phi`) and to
//! `-phi` as `phi -> infinity` (the canonical tail, `n ~ e^-phi`). The
//! `n = 1` boundary between the regimes sits exactly at `phi = ln 2`.
//!
//! A density proportional to `1/x` over whole decades puts leading digit `d`
//! at frequency `log10(1 + 1/d)`; `benford_frequencies` evaluates that law
//! analytically and by seeded inverse-CDF sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Where a point of the occupation curve sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `n > 1` and the local slope is near -1.
    PowerLaw,
    /// Neither asymptotic slope is within 0.1.
    Crossover,
    /// `n < 1` and the local slope is near `-phi`.
    Canonical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::PowerLaw => write!(f, "power_law"),
            Regime::Crossover => write!(f, "crossover"),
            Regime::Canonical => write!(f, "canonical"),
        }
    }
}

/// One sample of the occupation curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub phi: f64,
    pub occupation: f64,
    pub log_phi: f64,
    pub log_n: f64,
    pub local_slope: f64,
    pub regime: Regime,
}

/// `n(phi) = 1/(e^phi - 1)`, computed through `exp_m1` so small `phi`
/// keeps full precision.
pub fn planck_occupation(phi: f64) -> f64 {
    1.0 / phi.exp_m1()
}

/// Analytic log-log slope `s(phi) = -phi (1 + n(phi))`.
pub fn analytic_slope(phi: f64) -> f64 {
    -phi * (1.0 + planck_occupation(phi))
}

fn classify(phi: f64, occupation: f64, slope: f64) -> Regime {
    let off_power_law = (slope + 1.0).abs() > 0.1;
    let off_canonical = (slope + phi).abs() > 0.1;
    if off_power_law && off_canonical {
        Regime::Crossover
    } else if occupation > 1.0 {
        Regime::PowerLaw
    } else if occupation < 1.0 {
        Regime::Canonical
    } else {
        Regime::Crossover
    }
}

fn curve_point(phi: f64) -> CurvePoint {
    let occupation = planck_occupation(phi);
    let local_slope = -phi * (1.0 + occupation);
    CurvePoint {
        phi,
        occupation,
        log_phi: phi.ln(),
        log_n: occupation.ln(),
        local_slope,
        regime: classify(phi, occupation, local_slope),
    }
}

/// Sample the occupation curve on a log-spaced grid of `points` values of
/// `phi` from `phi_min` to `phi_max` inclusive.
pub fn planck_curve(phi_min: f64, phi_max: f64, points: usize) -> Result<Vec<CurvePoint>> {
    if !(phi_min.is_finite() && phi_max.is_finite() && phi_min > 0.0 && phi_min < phi_max) {
        return Err(Error::InvalidPhiRange { phi_min, phi_max });
    }
    if points < 2 {
        return Err(Error::TooFewPoints { points });
    }
    let ratio = phi_max / phi_min;
    let last = points - 1;
    let grid = (0..points).map(|i| {
        if i == 0 {
            phi_min
        } else if i == last {
            phi_max
        } else {
            phi_min * ratio.powf(i as f64 / last as f64)
        }
    });
    Ok(grid.map(curve_point).collect())
}

/// Central finite difference of `ln n` with respect to `ln phi`, using the
/// multiplicative stencil `phi/ratio, phi*ratio`.
///
/// Agrees with [`analytic_slope`] to `O((ln ratio)^2)`. `ratio` must lie in
/// `(1, 1.1]`.
pub fn numeric_slope(phi: f64, ratio: f64) -> Result<f64> {
    if !(phi.is_finite() && phi > 0.0) {
        return Err(Error::InvalidPhiRange {
            phi_min: phi,
            phi_max: phi,
        });
    }
    if !(ratio > 1.0 && ratio <= 1.1) {
        return Err(Error::InvalidSlopeRatio { ratio });
    }
    let upper = planck_occupation(phi * ratio).ln();
    let lower = planck_occupation(phi / ratio).ln();
    if !(upper.is_finite() && lower.is_finite()) {
        return Err(Error::NonFiniteResult {
            what: "log occupation at the finite-difference stencil",
        });
    }
    Ok((upper - lower) / (2.0 * ratio.ln()))
}

/// Relative gap between the occupation curve and the pure power law `1/phi`:
/// `|n(phi) - 1/phi| * phi`.
///
/// Small (about `phi/2`) deep in the power-law regime, approaching 1 in the
/// canonical regime.
pub fn rayleigh_jeans_gap(phi: f64) -> Result<f64> {
    if !(phi.is_finite() && phi > 0.0) {
        return Err(Error::InvalidPhiRange {
            phi_min: phi,
            phi_max: phi,
        });
    }
    Ok((planck_occupation(phi) - 1.0 / phi).abs() * phi)
}

/// How digit frequencies are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenfordMode {
    /// Closed-form integration of the `1/x` density.
    Analytic,
    /// Seeded inverse-CDF draws from the same density.
    Sampled,
}

/// Minimum sample count accepted in [`BenfordMode::Sampled`].
pub const MIN_BENFORD_SAMPLES: u64 = 10_000;

/// Leading-digit frequencies of the `1/x` density on `[1, 10^decades]`.
///
/// The support covers whole decades, so the analytic answer is exactly the
/// digit law `log10(1 + 1/d)` for every `decades >= 1`; the parameter only
/// affects the spread of the sampled draws. Sampling inverts the CDF as
/// `x = 10^(u * decades)` with `u` uniform in `[0, 1)` from a seeded
/// generator, so runs are reproducible.
pub fn benford_frequencies(
    decades: u32,
    mode: BenfordMode,
    samples: u64,
    seed: u64,
) -> Result<[f64; 9]> {
    if decades < 1 {
        return Err(Error::InvalidDecades { decades });
    }
    match mode {
        BenfordMode::Analytic => {
            let mut freq = [0.0_f64; 9];
            for (d, slot) in freq.iter_mut().enumerate() {
                *slot = (1.0 + 1.0 / (d as f64 + 1.0)).log10();
            }
            Ok(freq)
        }
        BenfordMode::Sampled => {
            if samples < MIN_BENFORD_SAMPLES {
                return Err(Error::TooFewSamples {
                    samples,
                    min: MIN_BENFORD_SAMPLES,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = [0_u64; 9];
            for _ in 0..samples {
                let u: f64 = rng.random();
                // Only the mantissa decides the leading digit.
                let mantissa = 10.0_f64.powf((u * decades as f64).fract());
                let digit = (mantissa as usize).clamp(1, 9);
                counts[digit - 1] += 1;
            }
            let mut freq = [0.0_f64; 9];
            for (slot, &count) in freq.iter_mut().zip(&counts) {
                *slot = count as f64 / samples as f64;
            }
            Ok(freq)
        }
    }
}

/// The occupation-curve dataset behind the log-log figure, ready for CSV
/// emission.
#[derive(Debug, Clone)]
pub struct Figure1Table {
    rows: Vec<CurvePoint>,
}

/// CSV header of [`Figure1Table::to_csv`].
pub const FIGURE1_HEADER: &str = "phi,occupation,log_phi,log_n,local_slope,regime";

impl Figure1Table {
    pub fn rows(&self) -> &[CurvePoint] {
        &self.rows
    }

    /// RFC-4180-style CSV: header row, comma separators, `.` decimals,
    /// LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(FIGURE1_HEADER);
        out.push('\n');
        for p in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.phi, p.occupation, p.log_phi, p.log_n, p.local_slope, p.regime
            ));
        }
        out
    }
}

/// Tabulate the occupation curve for the log-log figure.
pub fn figure1_table(phi_min: f64, phi_max: f64, points: usize) -> Result<Figure1Table> {
    Ok(Figure1Table {
        rows: planck_curve(phi_min, phi_max, points)?,
    })
}
