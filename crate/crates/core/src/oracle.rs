//! Independent brute-force verification.
//!
//! Nothing in this module reuses the closed forms it checks: configurations
//! are enumerated one by one, maximizers are found by exhaustive grid scans,
//! and the constrained-maximum property is probed with random
//! constraint-preserving exchanges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{EnsembleSpec, StatisticsKind};
use crate::entropy::{per_state_term, OccupationDistribution};
use crate::error::{Error, Result};
use crate::maxent::EnergyLevels;

/// Enumeration refuses ensembles with more states or particles than this.
pub const ENUMERATION_LIMIT: u64 = 12;

/// Grid search refuses more states than this.
pub const GRID_STATE_LIMIT: usize = 4;

/// One concrete configuration: particle counts per state, summing to `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    counts: Vec<u64>,
}

impl OccupationVector {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Lazily yields every valid occupation vector of `spec` exactly once, in
/// ascending lexicographic order.
///
/// Guarded to `N <= 12` and `P <= 12`; the closed-form counts grow too fast
/// beyond that for an exhaustive check to stay useful.
pub fn enumerate_occupations(spec: &EnsembleSpec) -> Result<OccupationEnumeration> {
    if spec.n_states() > ENUMERATION_LIMIT || spec.n_particles() > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            n_states: spec.n_states(),
            n_particles: spec.n_particles(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let cap = match spec.kind() {
        StatisticsKind::Exclusion => 1,
        StatisticsKind::Bosonic => u64::MAX,
    };
    let mut first = vec![0_u64; spec.n_states() as usize];
    fill_minimal(&mut first, spec.n_particles(), cap);
    Ok(OccupationEnumeration {
        cap,
        next: Some(first),
    })
}

// Lexicographically smallest arrangement of `total` particles: zeros in
// front, packed against the right edge up to `cap` per state.
fn fill_minimal(slots: &mut [u64], mut total: u64, cap: u64) {
    for slot in slots.iter_mut().rev() {
        let take = total.min(cap);
        *slot = take;
        total -= take;
    }
    debug_assert_eq!(total, 0, "caller guarantees capacity");
}

#[derive(Debug)]
pub struct OccupationEnumeration {
    cap: u64,
    next: Option<Vec<u64>>,
}

impl Iterator for OccupationEnumeration {
    type Item = OccupationVector;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let mut successor = current.clone();
        let n = successor.len();
        let mut advanced = false;
        for j in (0..n.saturating_sub(1)).rev() {
            let tail: u64 = successor[j + 1..].iter().sum();
            let room = (n - 1 - j) as u64;
            if tail >= 1 && successor[j] < self.cap && tail - 1 <= self.cap.saturating_mul(room) {
                successor[j] += 1;
                fill_minimal(&mut successor[j + 1..], tail - 1, self.cap);
                advanced = true;
                break;
            }
        }
        if advanced {
            self.next = Some(successor);
        }
        Some(OccupationVector { counts: current })
    }
}

/// Result of an exhaustive grid maximization.
#[derive(Debug, Clone)]
pub struct GridSearchOutcome {
    /// The entropy-maximizing feasible grid point (first found among ties).
    pub occupations: OccupationDistribution,
    /// Entropy at the maximizer.
    pub entropy: f64,
    /// Every feasible grid point within 1e-12 of the maximum entropy,
    /// including the reported one.
    pub ties: Vec<Vec<f64>>,
    /// Number of grid points satisfying both constraints.
    pub feasible_points: u64,
    /// Constraint tolerance used: `grid_step * max(E_i)`.
    pub tolerance: f64,
}

/// Exhaustively scan occupation vectors on a grid of spacing `grid_step`,
/// keep those satisfying both constraint totals within
/// `grid_step * max(E_i)`, and return the one maximizing the kind's entropy
/// functional.
///
/// Limited to `N <= 4` states and steps in `[1e-3, 0.1]`; the scan prunes on
/// partial sums, which keeps the worst case well under 10^8 evaluations.
pub fn grid_search_maxent(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    target_energy: f64,
    target_particles: f64,
    grid_step: f64,
) -> Result<GridSearchOutcome> {
    let n = levels.len();
    if n > GRID_STATE_LIMIT {
        return Err(Error::TooManyGridStates {
            n_states: n,
            limit: GRID_STATE_LIMIT,
        });
    }
    if !(1e-3..=0.1).contains(&grid_step) {
        return Err(Error::InvalidGridStep {
            step: grid_step,
            lo: 1e-3,
            hi: 0.1,
        });
    }
    if !target_energy.is_finite() {
        return Err(Error::NonFiniteParameter {
            name: "target_energy",
            value: target_energy,
        });
    }
    if !target_particles.is_finite() {
        return Err(Error::NonFiniteParameter {
            name: "target_particles",
            value: target_particles,
        });
    }

    let tolerance = grid_step * levels.max_energy();
    let term = per_state_term(kind.into());
    let exclusion = kind == StatisticsKind::Exclusion;
    let energies = levels.as_slice();

    struct Scan<'a> {
        energies: &'a [f64],
        step: f64,
        target_particles: f64,
        target_energy: f64,
        tolerance: f64,
        exclusion: bool,
        term: fn(f64) -> f64,
        point: Vec<f64>,
        best_entropy: f64,
        best: Option<Vec<f64>>,
        ties: Vec<(f64, Vec<f64>)>,
        feasible: u64,
    }

    impl Scan<'_> {
        fn descend(&mut self, depth: usize, sum_p: f64, sum_u: f64) {
            if depth == self.energies.len() {
                if (sum_p - self.target_particles).abs() <= self.tolerance
                    && (sum_u - self.target_energy).abs() <= self.tolerance
                {
                    self.feasible += 1;
                    let entropy: f64 = self.point.iter().copied().map(self.term).sum();
                    if entropy > self.best_entropy {
                        self.best_entropy = entropy;
                        self.best = Some(self.point.clone());
                    }
                    self.ties.push((entropy, self.point.clone()));
                    // Drop clearly beaten candidates now and then to bound memory.
                    if self.ties.len() > 4096 {
                        let cutoff = self.best_entropy - 1e-12;
                        self.ties.retain(|(s, _)| *s >= cutoff);
                    }
                }
                return;
            }

            // Remaining states can hold at most cap each (exclusion) or any
            // amount (bosonic); skip counts that cannot reach the particle
            // target any more.
            let states_after = (self.energies.len() - depth - 1) as f64;
            let mut k = if self.exclusion {
                let needed = self.target_particles - self.tolerance - sum_p - states_after;
                if needed > 0.0 {
                    (needed / self.step).ceil() as u64
                } else {
                    0
                }
            } else {
                0
            };

            let energy = self.energies[depth];
            loop {
                let value = k as f64 * self.step;
                if self.exclusion && value > 1.0 {
                    break;
                }
                if sum_p + value > self.target_particles + self.tolerance {
                    break;
                }
                let u = sum_u + value * energy;
                if u > self.target_energy + self.tolerance {
                    break;
                }
                self.point[depth] = value;
                self.descend(depth + 1, sum_p + value, u);
                k += 1;
            }
            self.point[depth] = 0.0;
        }
    }

    let mut scan = Scan {
        energies,
        step: grid_step,
        target_particles,
        target_energy,
        tolerance,
        exclusion,
        term,
        point: vec![0.0; n],
        best_entropy: f64::NEG_INFINITY,
        best: None,
        ties: Vec::new(),
        feasible: 0,
    };
    scan.descend(0, 0.0, 0.0);

    let best = scan.best.ok_or(Error::NoFeasibleGridPoint { tolerance })?;
    let cutoff = scan.best_entropy - 1e-12;
    let ties = scan
        .ties
        .into_iter()
        .filter(|(s, _)| *s >= cutoff)
        .map(|(_, p)| p)
        .collect();
    Ok(GridSearchOutcome {
        occupations: OccupationDistribution::new(best, kind.into())?,
        entropy: scan.best_entropy,
        ties,
        feasible_points: scan.feasible,
        tolerance,
    })
}

/// Probe whether `occupations` is a constrained entropy maximum, not merely
/// a stationary point.
///
/// Draws `trials` random exchanges across three states. Each exchange moves
/// along the null space of both constraints (particle number and energy),
/// so it preserves them exactly; its largest component is at most
/// `magnitude`, shrunk further when the domain of the distribution kind
/// requires it. Returns `false` as soon as any exchange raises the entropy
/// functional by more than 1e-12.
///
/// The generator is seeded explicitly, so runs are reproducible.
pub fn perturbation_test(
    levels: &EnergyLevels,
    occupations: &OccupationDistribution,
    trials: u32,
    magnitude: f64,
    seed: u64,
) -> Result<bool> {
    let n = levels.len();
    if n < 3 {
        return Err(Error::TooFewStatesForExchange { n_states: n });
    }
    if occupations.len() != n {
        return Err(Error::LengthMismatch {
            occupations: occupations.len(),
            levels: n,
        });
    }
    if !(magnitude.is_finite() && magnitude > 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "magnitude",
            value: magnitude,
        });
    }

    let term = per_state_term(occupations.kind());
    let upper = match occupations.kind() {
        crate::entropy::OccupationKind::Bosonic => f64::INFINITY,
        _ => 1.0,
    };
    let energies = levels.as_slice();
    let values = occupations.values();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        // Three distinct states.
        let i = rng.random_range(0..n);
        let j = loop {
            let c = rng.random_range(0..n);
            if c != i {
                break c;
            }
        };
        let k = loop {
            let c = rng.random_range(0..n);
            if c != i && c != j {
                break c;
            }
        };

        // Null direction of both constraints across (i, j, k). Falls back to
        // a pure two-state swap when the three energies coincide (the energy
        // constraint is then implied by the particle one).
        let mut direction = [
            energies[j] - energies[k],
            energies[k] - energies[i],
            energies[i] - energies[j],
        ];
        if direction.iter().all(|d| *d == 0.0) {
            direction = [1.0, -1.0, 0.0];
        }
        let largest = direction.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let mut t_lo = -magnitude / largest;
        let mut t_hi = magnitude / largest;

        // Clip the amplitude so every coordinate stays inside the domain.
        for (&d, &v) in direction
            .iter()
            .zip([values[i], values[j], values[k]].iter())
        {
            if d == 0.0 {
                continue;
            }
            let to_floor = (0.0 - v) / d;
            let to_ceil = if upper.is_finite() {
                (upper - v) / d
            } else {
                f64::INFINITY * d.signum()
            };
            let (lo, hi) = if to_floor <= to_ceil {
                (to_floor, to_ceil)
            } else {
                (to_ceil, to_floor)
            };
            t_lo = t_lo.max(lo);
            t_hi = t_hi.min(hi);
        }
        if t_lo > t_hi {
            continue; // boundary-pinned solution leaves no room to move
        }

        let t = t_lo + rng.random::<f64>() * (t_hi - t_lo);
        let base = [term(values[i]), term(values[j]), term(values[k])];
        let delta = term(values[i] + t * direction[0]) - base[0]
            + term(values[j] + t * direction[1])
            - base[1]
            + term(values[k] + t * direction[2])
            - base[2];
        if delta > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}
