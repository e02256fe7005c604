//! # boltzlab
//!
//! A laboratory for occupation statistics: exact microstate counting, the
//! entropy functionals those counts induce, constrained maximization through
//! Lagrange multipliers, and the resulting occupation laws with their two
//! regimes (power-law tail at high occupation, canonical tail at low
//! occupation).
//!
//! Modules:
//!
//! - [`combinatorics`] — exact and log-space configuration counts for
//!   exclusion and bosonic ensembles, plus the Stirling entropy and its
//!   measured error.
//! - [`entropy`] — the Gibbs, exclusion, and bosonic per-state entropy
//!   functionals and their shared low-occupation limit.
//! - [`maxent`] — canonical, Bose-Einstein, and Fermi-Dirac occupation laws;
//!   solvers inverting the constraint totals for the multipliers.
//! - [`oracle`] — brute-force verification: exhaustive enumeration, grid
//!   search maximization, and random constraint-preserving perturbations.
//! - [`analysis`] — the log-log occupation curve, its local slope and
//!   regimes, the Rayleigh-Jeans gap, and Benford digit frequencies.
//!
//! All entropies and logarithms are natural (nats). Everything is pure and
//! reentrant; solvers and sampled oracles take explicit seeds where
//! randomness is involved.

pub mod analysis;
pub mod combinatorics;
pub mod entropy;
pub mod error;
pub mod maxent;
pub mod oracle;

pub use analysis::{
    analytic_slope, benford_frequencies, figure1_table, numeric_slope, planck_curve,
    planck_occupation, rayleigh_jeans_gap, BenfordMode, CurvePoint, Figure1Table, Regime,
    FIGURE1_HEADER,
};
pub use combinatorics::{
    count_microstates, stirling_entropy, stirling_relative_error, EnsembleSpec, MicrostateCount,
    StatisticsKind, EXACT_COUNT_LIMIT,
};
pub use entropy::{
    bosonic_entropy, bosonic_term, exclusion_entropy, exclusion_term, gibbs_entropy, gibbs_term,
    low_occupation_deviation, total_entropy, OccupationDistribution, OccupationKind,
    NORMALIZATION_TOL,
};
pub use error::{Error, Result};
pub use maxent::{
    bosonic_occupation, canonical_distribution, exclusion_occupation, objective_value,
    solve_alpha_beta, solve_beta, stationarity_residual, EnergyLevels, LagrangeSolution,
    RESIDUAL_TOL,
};
pub use oracle::{
    enumerate_occupations, grid_search_maxent, perturbation_test, GridSearchOutcome,
    OccupationEnumeration, OccupationVector, ENUMERATION_LIMIT, GRID_STATE_LIMIT,
};
