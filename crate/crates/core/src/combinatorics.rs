//! Exact and log-space microstate counting for the two ensembles.
//!
//! An ensemble of `P` particles in `N` states has
//!
//! ```text
//! exclusion:  W = N! / ((N - P)! P!)            (at most one particle per state)
//! bosonic:    W = (N + P - 1)! / ((N - 1)! P!)  (unbounded occupation)
//! ```
//!
//! Counts are exact arbitrary-precision integers up to `N + P <=`
//! [`EXACT_COUNT_LIMIT`]; `ln W` is always available, computed by summing
//! logarithms of the binomial factors (never by the Stirling formula, so the
//! Stirling error measurement below has an independent reference).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::entropy::{bosonic_term, exclusion_term};
use crate::error::{Error, Result};

/// Exact counts are materialized only while `n_states + n_particles` stays
/// at or below this bound; beyond it only `ln W` is computed.
pub const EXACT_COUNT_LIMIT: u64 = 10_000;

/// The two counting regimes: at most one particle per state, or unbounded
/// occupation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatisticsKind {
    Exclusion,
    Bosonic,
}

impl std::fmt::Display for StatisticsKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StatisticsKind::Exclusion => write!(f, "exclusion"),
            StatisticsKind::Bosonic => write!(f, "bosonic"),
        }
    }
}

/// A validated ensemble: `N >= 1` states, `P >= 0` particles, and `P <= N`
/// whenever the kind is exclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    n_states: u64,
    n_particles: u64,
    kind: StatisticsKind,
}

impl EnsembleSpec {
    pub fn new(n_states: u64, n_particles: u64, kind: StatisticsKind) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::EmptyEnsemble);
        }
        if kind == StatisticsKind::Exclusion && n_particles > n_states {
            return Err(Error::ExclusionOverfilled {
                n_states,
                n_particles,
            });
        }
        if n_states.checked_add(n_particles).is_none() {
            return Err(Error::EnsembleTooLarge);
        }
        Ok(Self {
            n_states,
            n_particles,
            kind,
        })
    }

    pub fn n_states(&self) -> u64 {
        self.n_states
    }

    pub fn n_particles(&self) -> u64 {
        self.n_particles
    }

    pub fn kind(&self) -> StatisticsKind {
        self.kind
    }

    /// Mean occupation per state, `P / N`.
    pub fn occupation_ratio(&self) -> f64 {
        self.n_particles as f64 / self.n_states as f64
    }
}

/// A microstate count: the exact integer `W` when materialized, and `ln W`
/// in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct MicrostateCount {
    exact: Option<BigUint>,
    log_value: f64,
}

impl MicrostateCount {
    /// The exact count, absent above [`EXACT_COUNT_LIMIT`].
    pub fn exact(&self) -> Option<&BigUint> {
        self.exact.as_ref()
    }

    /// `ln W` in nats, computed by summed logarithms.
    pub fn log_value(&self) -> f64 {
        self.log_value
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `ln W` recomputed from the exact big integer (top 53 bits plus a
    /// power-of-two shift). This is an independent route from `log_value`
    /// and exists to cross-check it.
    pub fn ln_from_exact(&self) -> Option<f64> {
        self.exact.as_ref().map(ln_big)
    }
}

fn ln_big(w: &BigUint) -> f64 {
    let bits = w.bits();
    if bits <= 53 {
        return w.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (w >> shift).to_f64().expect("53 bits fit in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn binomial_exact(n: u64, k: u64) -> BigUint {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

fn binomial_log(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = 0.0_f64;
    for i in 1..=k {
        acc += ((n - k + i) as f64).ln() - (i as f64).ln();
    }
    acc
}

fn binomial_params(spec: &EnsembleSpec) -> (u64, u64) {
    match spec.kind() {
        StatisticsKind::Exclusion => (spec.n_states(), spec.n_particles()),
        // (N + P - 1) choose P; N >= 1 keeps the subtraction safe.
        StatisticsKind::Bosonic => (spec.n_states() + spec.n_particles() - 1, spec.n_particles()),
    }
}

/// Count the microstates of `spec`.
///
/// `W = C(N, P)` for exclusion statistics and `W = C(N + P - 1, P)` for
/// bosonic statistics, with the `-1` terms kept verbatim (no `N - 1 ~ N`
/// simplification). Invalid ensembles are rejected at [`EnsembleSpec::new`].
pub fn count_microstates(spec: &EnsembleSpec) -> MicrostateCount {
    let (n, k) = binomial_params(spec);
    let log_value = binomial_log(n, k);
    let exact = if spec.n_states() + spec.n_particles() <= EXACT_COUNT_LIMIT {
        Some(binomial_exact(n, k))
    } else {
        None
    };
    MicrostateCount { exact, log_value }
}

/// The Stirling-approximated entropy `S ~ ln W` in nats.
///
/// With `p = n = P/N`:
///
/// ```text
/// exclusion:  S ~ -N * [p ln p + (1 - p) ln(1 - p)]
/// bosonic:    S ~  N * [(n + 1) ln(n + 1) - n ln n]
/// ```
///
/// Boundary ratios (`p` in {0, 1}, or `P = 0`) return 0 by the continuous
/// extension `x ln x -> 0`.
pub fn stirling_entropy(spec: &EnsembleSpec) -> f64 {
    let n_states = spec.n_states() as f64;
    let ratio = spec.occupation_ratio();
    match spec.kind() {
        StatisticsKind::Exclusion => n_states * exclusion_term(ratio),
        StatisticsKind::Bosonic => n_states * bosonic_term(ratio),
    }
}

/// Relative error of the Stirling entropy against `ln W` from summed
/// logarithms: `|S_stirling - ln W| / ln W`.
///
/// When `W = 1` (so `ln W = 0`) the relative form is undefined and the
/// absolute error is returned instead.
pub fn stirling_relative_error(spec: &EnsembleSpec) -> f64 {
    let approx = stirling_entropy(spec);
    let ln_w = count_microstates(spec).log_value();
    if ln_w == 0.0 {
        approx.abs()
    } else {
        (approx - ln_w).abs() / ln_w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u64, p: u64, kind: StatisticsKind) -> EnsembleSpec {
        EnsembleSpec::new(n, p, kind).unwrap()
    }

    #[test]
    fn exclusion_count_3_choose_2() {
        let c = count_microstates(&spec(3, 2, StatisticsKind::Exclusion));
        assert_eq!(c.exact().unwrap(), &BigUint::from(3_u32));
    }

    #[test]
    fn bosonic_count_3_states_2_particles() {
        // C(4, 2) = 6
        let c = count_microstates(&spec(3, 2, StatisticsKind::Bosonic));
        assert_eq!(c.exact().unwrap(), &BigUint::from(6_u32));
    }

    #[test]
    fn empty_ensemble_counts_one() {
        for kind in [StatisticsKind::Exclusion, StatisticsKind::Bosonic] {
            let c = count_microstates(&spec(5, 0, kind));
            assert_eq!(c.exact().unwrap(), &BigUint::one());
            assert_eq!(c.log_value(), 0.0);
        }
    }

    #[test]
    fn exclusion_overfill_rejected() {
        let err = EnsembleSpec::new(3, 4, StatisticsKind::Exclusion).unwrap_err();
        assert!(matches!(err, Error::ExclusionOverfilled { .. }));
    }

    #[test]
    fn zero_states_rejected() {
        assert!(matches!(
            EnsembleSpec::new(0, 0, StatisticsKind::Bosonic),
            Err(Error::EmptyEnsemble)
        ));
    }

    #[test]
    fn bosonic_log_count_100_100() {
        // ln C(199, 100), frozen from an exact big-integer computation.
        let c = count_microstates(&spec(100, 100, StatisticsKind::Bosonic));
        let expected = 135.060_088_900_718_55;
        assert!((c.log_value() - expected).abs() <= 1e-10 * expected);

        // Same value through the independent big-integer route.
        let oracle = c.ln_from_exact().unwrap();
        assert!((c.log_value() - oracle).abs() <= 1e-12 * oracle.max(1.0));
    }

    #[test]
    fn exact_absent_above_limit() {
        let c = count_microstates(&spec(9_000, 2_000, StatisticsKind::Bosonic));
        assert!(!c.is_exact());
        assert!(c.log_value() > 0.0);

        let c = count_microstates(&spec(6_000, 4_000, StatisticsKind::Bosonic));
        assert!(c.is_exact());
    }

    #[test]
    fn log_value_consistent_with_exact() {
        for kind in [StatisticsKind::Exclusion, StatisticsKind::Bosonic] {
            for (n, p) in [(1, 0), (1, 1), (7, 3), (40, 17), (500, 250), (1000, 1000)] {
                if kind == StatisticsKind::Exclusion && p > n {
                    continue;
                }
                let c = count_microstates(&spec(n, p, kind));
                let oracle = c.ln_from_exact().unwrap();
                assert!(
                    (c.log_value() - oracle).abs() <= 1e-12 * oracle.max(1.0),
                    "log mismatch at N={n} P={p} {kind}: {} vs {oracle}",
                    c.log_value()
                );
            }
        }
    }

    #[test]
    fn symmetry_of_counts() {
        for n in 1..=20_u64 {
            for p in 0..=n {
                let a = count_microstates(&spec(n, p, StatisticsKind::Exclusion));
                let b = count_microstates(&spec(n, n - p, StatisticsKind::Exclusion));
                assert_eq!(a.exact(), b.exact());
            }
        }
        // C(N + P - 1, P) = C(N + P - 1, N - 1)
        for n in 1..=15_u64 {
            for p in 0..=15_u64 {
                let w = count_microstates(&spec(n, p, StatisticsKind::Bosonic));
                assert_eq!(w.exact().unwrap(), &binomial_exact(n + p - 1, n - 1));
            }
        }
    }

    // Count through the public API, mapping invalid exclusion specs to 0.
    fn w_or_zero(n: u64, p: u64, kind: StatisticsKind) -> BigUint {
        match EnsembleSpec::new(n, p, kind) {
            Ok(s) => count_microstates(&s).exact().unwrap().clone(),
            Err(_) => BigUint::from(0_u32),
        }
    }

    #[test]
    fn pascal_recurrences() {
        for n in 2..=30_u64 {
            for p in 1..=30_u64 {
                if p <= n {
                    let lhs = w_or_zero(n, p, StatisticsKind::Exclusion);
                    let rhs = w_or_zero(n - 1, p, StatisticsKind::Exclusion)
                        + w_or_zero(n - 1, p - 1, StatisticsKind::Exclusion);
                    assert_eq!(lhs, rhs, "exclusion recurrence at N={n} P={p}");
                }
                let lhs = w_or_zero(n, p, StatisticsKind::Bosonic);
                let rhs = w_or_zero(n - 1, p, StatisticsKind::Bosonic)
                    + w_or_zero(n, p - 1, StatisticsKind::Bosonic);
                assert_eq!(lhs, rhs, "bosonic recurrence at N={n} P={p}");
            }
        }
    }

    #[test]
    fn stirling_symmetric_exclusion_point() {
        // p = 1/2 gives S ~ N ln 2.
        let s = stirling_entropy(&spec(100, 50, StatisticsKind::Exclusion));
        let expected = 100.0 * std::f64::consts::LN_2;
        assert!((s - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn stirling_bosonic_unit_occupation() {
        // n = 1 gives 2 ln 2 per state.
        let s = stirling_entropy(&spec(100, 100, StatisticsKind::Bosonic));
        let expected = 200.0 * std::f64::consts::LN_2;
        assert!((s - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn stirling_boundaries_are_zero() {
        assert_eq!(
            stirling_entropy(&spec(10, 0, StatisticsKind::Exclusion)),
            0.0
        );
        assert_eq!(
            stirling_entropy(&spec(10, 10, StatisticsKind::Exclusion)),
            0.0
        );
        assert_eq!(stirling_entropy(&spec(10, 0, StatisticsKind::Bosonic)), 0.0);
    }

    #[test]
    fn stirling_error_small_case() {
        // N = 3, P = 2 bosonic: compare against ln 6 directly.
        let s = spec(3, 2, StatisticsKind::Bosonic);
        let ln_w = count_microstates(&s).ln_from_exact().unwrap();
        let expected = (stirling_entropy(&s) - ln_w).abs() / ln_w;
        let got = stirling_relative_error(&s);
        assert!((got - expected).abs() < 1e-12);
        assert!(got > 0.5, "Stirling is crude at N=3: {got}");
    }

    #[test]
    fn stirling_error_reported_absolute_when_w_is_one() {
        // W = 1 => ln W = 0; the error degrades to the absolute form.
        let s = spec(5, 0, StatisticsKind::Bosonic);
        assert_eq!(stirling_relative_error(&s), 0.0);
    }

    #[test]
    fn stirling_error_under_one_percent_at_1000() {
        let b = stirling_relative_error(&spec(1000, 1000, StatisticsKind::Bosonic));
        assert!(b < 0.01, "bosonic error {b}");
        let e = stirling_relative_error(&spec(1000, 500, StatisticsKind::Exclusion));
        assert!(e < 0.01, "exclusion error {e}");
    }

    #[test]
    fn stirling_error_shrinks_along_diagonal() {
        let mut prev = f64::INFINITY;
        for k in 1..=6_u64 {
            let err = stirling_relative_error(&spec(10 * k, 10 * k, StatisticsKind::Bosonic));
            assert!(err < prev, "error not shrinking at k={k}: {err} >= {prev}");
            if k == 1 {
                // N = P = 10 against exact ln C(19, 10), frozen.
                assert!((err - 0.212_469_4).abs() < 1e-6, "err = {err}");
            }
            prev = err;
        }
    }
}
