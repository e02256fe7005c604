use thiserror::Error;

use crate::combinatorics::StatisticsKind;
use crate::entropy::OccupationKind;

/// Errors for every operation in the crate.
///
/// Variants split into two classes: domain/validation errors (a precondition
/// was violated by the input) and numerical errors (the computation itself
/// failed to converge or left the representable range). The CLI maps the
/// classes to distinct exit codes via [`Error::is_numerical`].
#[derive(Debug, Error)]
pub enum Error {
    // --- ensembles and counting ---
    #[error("ensemble must have at least one state")]
    EmptyEnsemble,

    #[error(
        "exclusion statistics admits at most one particle per state: \
         {n_particles} particles > {n_states} states"
    )]
    ExclusionOverfilled { n_states: u64, n_particles: u64 },

    #[error("ensemble too large: n_states + n_particles must fit in a u64")]
    EnsembleTooLarge,

    // --- occupation distributions ---
    #[error("occupation distribution must contain at least one state")]
    EmptyDistribution,

    #[error("occupation out of domain for {kind} values: values[{index}] = {value}")]
    OccupationOutOfDomain {
        kind: OccupationKind,
        index: usize,
        value: f64,
    },

    #[error("probabilities must sum to 1 within 1e-9, got sum = {sum}")]
    NotNormalized { sum: f64 },

    #[error("expected a {expected} distribution, got {found}")]
    KindMismatch {
        expected: OccupationKind,
        found: OccupationKind,
    },

    #[error("occupations must lie strictly inside (0, 1): values[{index}] = {value}")]
    InteriorRequired { index: usize, value: f64 },

    // --- energy levels ---
    #[error("energy levels must contain at least one level")]
    EmptyLevels,

    #[error("energies must be finite and nonnegative: energies[{index}] = {value}")]
    InvalidEnergy { index: usize, value: f64 },

    #[error("occupations ({occupations}) and energy levels ({levels}) differ in length")]
    LengthMismatch { occupations: usize, levels: usize },

    // --- maxent solving ---
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error(
        "bosonic occupation diverges at level {index}: \
         alpha + beta * E = {exponent} must be positive"
    )]
    DivergentOccupation { index: usize, exponent: f64 },

    #[error("stationarity gradient undefined at boundary occupation values[{index}] = {value}")]
    BoundaryOccupation { index: usize, value: f64 },

    #[error("target {name} = {target} outside the attainable range ({lo}, {hi})")]
    TargetOutOfRange {
        name: &'static str,
        target: f64,
        lo: f64,
        hi: f64,
    },

    #[error(
        "targets (particles = {particles}, energy = {energy}) are jointly infeasible: {detail}"
    )]
    InfeasibleTargets {
        particles: f64,
        energy: f64,
        detail: String,
    },

    #[error("no convergence after {iterations} iterations; last bracket [{lo}, {hi}]")]
    NoConvergence { iterations: u32, lo: f64, hi: f64 },

    #[error("{what} left the representable range (not finite)")]
    NonFiniteResult { what: &'static str },

    // --- oracle ---
    #[error(
        "enumeration guard: n_states and n_particles must both be <= {limit}, \
         got ({n_states}, {n_particles})"
    )]
    EnumerationTooLarge {
        n_states: u64,
        n_particles: u64,
        limit: u64,
    },

    #[error("grid search supports at most {limit} states, got {n_states}")]
    TooManyGridStates { n_states: usize, limit: usize },

    #[error("grid step must lie in [{lo}, {hi}], got {step}")]
    InvalidGridStep { step: f64, lo: f64, hi: f64 },

    #[error("no grid point satisfies both constraints within tolerance {tolerance}")]
    NoFeasibleGridPoint { tolerance: f64 },

    #[error("constraint-preserving exchange needs at least 3 states, got {n_states}")]
    TooFewStatesForExchange { n_states: usize },

    #[error("statistics kind {kind} is not supported here: {detail}")]
    UnsupportedKind {
        kind: StatisticsKind,
        detail: &'static str,
    },

    // --- analysis ---
    #[error("curve range requires 0 < phi_min < phi_max, got [{phi_min}, {phi_max}]")]
    InvalidPhiRange { phi_min: f64, phi_max: f64 },

    #[error("curve needs at least 2 points, got {points}")]
    TooFewPoints { points: usize },

    #[error("slope ratio must lie in (1, 1.1], got {ratio}")]
    InvalidSlopeRatio { ratio: f64 },

    #[error("decades must be >= 1, got {decades}")]
    InvalidDecades { decades: u32 },

    #[error("sampled digit frequencies need at least {min} draws, got {samples}")]
    TooFewSamples { samples: u64, min: u64 },
}

impl Error {
    /// True for numerical failures (non-convergence, overflow); false for
    /// domain/validation errors. Determines the CLI exit code (2 vs 1).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NonFiniteResult { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
