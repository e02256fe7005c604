//! The three per-state entropy functionals, in nats.
//!
//! For a probability `p` or an occupation number `n`:
//!
//! ```text
//! gibbs:      -p ln p                              (p in [0, 1])
//! exclusion:  -[n ln n + (1 - n) ln(1 - n)]        (n in [0, 1])
//! bosonic:    (n + 1) ln(n + 1) - n ln n           (n >= 0)
//! ```
//!
//! Every form uses the continuous extension `x ln x -> 0` at the domain
//! boundaries. Per-state terms are exposed alongside the summed functionals
//! so that Lagrangians and pointwise property checks can be assembled from
//! them.

use crate::combinatorics::StatisticsKind;
use crate::error::{Error, Result};

/// Absolute tolerance on `sum(p) - 1` for probability distributions.
/// Inputs outside it are rejected, never renormalized.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Domain of the values in an [`OccupationDistribution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OccupationKind {
    /// Probabilities: values in [0, 1] summing to 1.
    Probability,
    /// Mean occupations under the exclusion rule: values in [0, 1].
    Exclusion,
    /// Bosonic occupation numbers: values >= 0, unbounded above.
    Bosonic,
}

impl std::fmt::Display for OccupationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OccupationKind::Probability => write!(f, "probability"),
            OccupationKind::Exclusion => write!(f, "exclusion"),
            OccupationKind::Bosonic => write!(f, "bosonic"),
        }
    }
}

impl From<StatisticsKind> for OccupationKind {
    fn from(kind: StatisticsKind) -> Self {
        match kind {
            StatisticsKind::Exclusion => OccupationKind::Exclusion,
            StatisticsKind::Bosonic => OccupationKind::Bosonic,
        }
    }
}

/// Per-state occupations (or probabilities) validated against their kind's
/// domain at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationDistribution {
    values: Vec<f64>,
    kind: OccupationKind,
}

impl OccupationDistribution {
    pub fn new(values: Vec<f64>, kind: OccupationKind) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in values.iter().enumerate() {
            let ok = match kind {
                OccupationKind::Probability | OccupationKind::Exclusion => {
                    (0.0..=1.0).contains(&value)
                }
                OccupationKind::Bosonic => value >= 0.0 && value.is_finite(),
            };
            if !ok {
                return Err(Error::OccupationOutOfDomain { kind, index, value });
            }
        }
        if kind == OccupationKind::Probability {
            let sum: f64 = values.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::NotNormalized { sum });
            }
        }
        Ok(Self { values, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> OccupationKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total particle content, `sum(n_i)`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Per-state Gibbs term `-p ln p`, zero at `p = 0`.
pub fn gibbs_term(p: f64) -> f64 {
    -x_ln_x(p)
}

/// Per-state exclusion term `-[n ln n + (1 - n) ln(1 - n)]`, zero at both
/// boundaries.
pub fn exclusion_term(n: f64) -> f64 {
    let tail = if n == 1.0 {
        0.0
    } else {
        (1.0 - n) * (-n).ln_1p()
    };
    -(x_ln_x(n) + tail)
}

/// Per-state bosonic term `(n + 1) ln(n + 1) - n ln n`, zero at `n = 0`.
pub fn bosonic_term(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        (n + 1.0) * n.ln_1p() - n * n.ln()
    }
}

fn require_kind(dist: &OccupationDistribution, expected: OccupationKind) -> Result<()> {
    if dist.kind() != expected {
        return Err(Error::KindMismatch {
            expected,
            found: dist.kind(),
        });
    }
    Ok(())
}

/// Gibbs entropy `S = -sum p_i ln p_i` of a probability distribution.
pub fn gibbs_entropy(dist: &OccupationDistribution) -> Result<f64> {
    require_kind(dist, OccupationKind::Probability)?;
    Ok(dist.values().iter().copied().map(gibbs_term).sum())
}

/// Exclusion-counting entropy `S = -sum [n ln n + (1 - n) ln(1 - n)]`.
pub fn exclusion_entropy(dist: &OccupationDistribution) -> Result<f64> {
    require_kind(dist, OccupationKind::Exclusion)?;
    Ok(dist.values().iter().copied().map(exclusion_term).sum())
}

/// Bosonic-counting entropy `S = sum [(n + 1) ln(n + 1) - n ln n]`.
pub fn bosonic_entropy(dist: &OccupationDistribution) -> Result<f64> {
    require_kind(dist, OccupationKind::Bosonic)?;
    Ok(dist.values().iter().copied().map(bosonic_term).sum())
}

/// Entropy of `dist` under the functional matching its kind.
pub fn total_entropy(dist: &OccupationDistribution) -> f64 {
    let term = per_state_term(dist.kind());
    dist.values().iter().copied().map(term).sum()
}

pub(crate) fn per_state_term(kind: OccupationKind) -> fn(f64) -> f64 {
    match kind {
        OccupationKind::Probability => gibbs_term,
        OccupationKind::Exclusion => exclusion_term,
        OccupationKind::Bosonic => bosonic_term,
    }
}

/// How far the per-state entropy sits from its shared low-occupation limit
/// `-n ln n + n`, as a relative deviation, maximized over states.
///
/// Both the exclusion and the bosonic forms converge to that limit as
/// `n -> 0`; `kind` selects which form is measured. All values must lie
/// strictly inside (0, 1).
pub fn low_occupation_deviation(
    dist: &OccupationDistribution,
    kind: StatisticsKind,
) -> Result<f64> {
    for (index, &value) in dist.values().iter().enumerate() {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::InteriorRequired { index, value });
        }
    }
    let term = per_state_term(kind.into());
    let mut worst = 0.0_f64;
    for &n in dist.values() {
        let entropy = term(n);
        let reference = -(n * n.ln()) + n;
        worst = worst.max((entropy - reference).abs() / entropy);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn dist(values: &[f64], kind: OccupationKind) -> OccupationDistribution {
        OccupationDistribution::new(values.to_vec(), kind).unwrap()
    }

    #[test]
    fn gibbs_uniform_is_log_count() {
        let w = 8;
        let d = dist(&vec![1.0 / w as f64; w], OccupationKind::Probability);
        let s = gibbs_entropy(&d).unwrap();
        let expected = (w as f64).ln();
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn gibbs_point_mass_is_zero() {
        let d = dist(&[1.0, 0.0, 0.0], OccupationKind::Probability);
        assert_eq!(gibbs_entropy(&d).unwrap(), 0.0);
    }

    #[test]
    fn gibbs_skewed_case() {
        // -[0.5 ln 0.5 + 2 * 0.25 ln 0.25] = 1.5 ln 2
        let d = dist(&[0.5, 0.25, 0.25], OccupationKind::Probability);
        let s = gibbs_entropy(&d).unwrap();
        assert!((s - 1.5 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn non_normalized_rejected() {
        let err =
            OccupationDistribution::new(vec![0.5, 0.4], OccupationKind::Probability).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn normalization_tolerance_is_not_loose() {
        let values = vec![0.5, 0.5 + 2e-9];
        assert!(OccupationDistribution::new(values, OccupationKind::Probability).is_err());
        let values = vec![0.5, 0.5 + 0.5e-9];
        assert!(OccupationDistribution::new(values, OccupationKind::Probability).is_ok());
    }

    #[test]
    fn exclusion_half_occupation_maximum() {
        let n = 10;
        let d = dist(&vec![0.5; n], OccupationKind::Exclusion);
        let s = exclusion_entropy(&d).unwrap();
        let expected = n as f64 * LN_2;
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn exclusion_deterministic_states_carry_no_entropy() {
        let d = dist(&[0.0, 1.0, 1.0, 0.0], OccupationKind::Exclusion);
        assert_eq!(exclusion_entropy(&d).unwrap(), 0.0);
    }

    #[test]
    fn exclusion_direct_evaluation() {
        let d = dist(&[0.1, 0.2], OccupationKind::Exclusion);
        let expected = -(0.1_f64 * 0.1_f64.ln() + 0.9 * 0.9_f64.ln())
            - (0.2_f64 * 0.2_f64.ln() + 0.8 * 0.8_f64.ln());
        assert!((exclusion_entropy(&d).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn exclusion_out_of_domain_rejected() {
        let err =
            OccupationDistribution::new(vec![0.5, 1.2], OccupationKind::Exclusion).unwrap_err();
        assert!(matches!(err, Error::OccupationOutOfDomain { index: 1, .. }));
    }

    #[test]
    fn bosonic_unit_occupations() {
        let n = 7;
        let d = dist(&vec![1.0; n], OccupationKind::Bosonic);
        let s = bosonic_entropy(&d).unwrap();
        let expected = n as f64 * 2.0 * LN_2;
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn bosonic_vacuum_is_zero() {
        let d = dist(&[0.0, 0.0, 0.0], OccupationKind::Bosonic);
        assert_eq!(bosonic_entropy(&d).unwrap(), 0.0);
    }

    #[test]
    fn bosonic_direct_evaluation() {
        let d = dist(&[0.5, 2.0], OccupationKind::Bosonic);
        let expected = (1.5_f64 * 1.5_f64.ln() - 0.5 * 0.5_f64.ln())
            + (3.0_f64 * 3.0_f64.ln() - 2.0 * 2.0_f64.ln());
        assert!((bosonic_entropy(&d).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn bosonic_negative_rejected() {
        let err =
            OccupationDistribution::new(vec![0.5, -0.1], OccupationKind::Bosonic).unwrap_err();
        assert!(matches!(err, Error::OccupationOutOfDomain { .. }));
    }

    #[test]
    fn kind_mismatch_rejected() {
        let d = dist(&[0.5, 0.5], OccupationKind::Exclusion);
        assert!(matches!(gibbs_entropy(&d), Err(Error::KindMismatch { .. })));
        assert!(matches!(
            bosonic_entropy(&d),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn low_occupation_forms_converge() {
        let d = dist(&[1e-6, 1e-6, 1e-6], OccupationKind::Bosonic);
        for kind in [StatisticsKind::Exclusion, StatisticsKind::Bosonic] {
            let dev = low_occupation_deviation(&d, kind).unwrap();
            assert!(dev < 1e-5, "{kind}: {dev}");
        }
    }

    #[test]
    fn half_occupation_is_not_low() {
        let d = dist(&[0.5], OccupationKind::Bosonic);
        for kind in [StatisticsKind::Exclusion, StatisticsKind::Bosonic] {
            let dev = low_occupation_deviation(&d, kind).unwrap();
            assert!((0.05..1.0).contains(&dev), "{kind}: {dev}");
        }
    }

    #[test]
    fn both_forms_agree_at_millesimal_occupation() {
        let n = 1e-3;
        let excl = exclusion_term(n);
        let bose = bosonic_term(n);
        assert!((excl - bose).abs() / excl < 1e-2);
    }

    #[test]
    fn low_occupation_requires_interior_values() {
        let d = dist(&[0.0, 0.5], OccupationKind::Exclusion);
        assert!(matches!(
            low_occupation_deviation(&d, StatisticsKind::Exclusion),
            Err(Error::InteriorRequired { index: 0, .. })
        ));
    }

    #[test]
    fn per_state_terms_match_sums() {
        let values = [0.1, 0.35, 0.8];
        let d = dist(&values, OccupationKind::Exclusion);
        let sum: f64 = values.iter().copied().map(exclusion_term).sum();
        assert_eq!(exclusion_entropy(&d).unwrap(), sum);
    }
}
