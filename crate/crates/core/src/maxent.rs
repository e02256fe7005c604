//! Constrained maximization of the entropy functionals.
//!
//! The objective is `f = -S + alpha * sum(n_i) + beta * sum(n_i E_i)`,
//! minimized at the stationary point. Setting the gradient to zero gives the
//! closed-form occupation laws
//!
//! ```text
//! probability:  p_i = e^{-beta E_i} / Z            (canonical)
//! bosonic:      n_i = 1 / (e^{alpha + beta E_i} - 1)
//! exclusion:    n_i = 1 / (e^{alpha + beta E_i} + 1)
//! ```
//!
//! `alpha = 0` is the first-class "Planck mode", where the particle-number
//! constraint is dropped and only the energy constraint remains. The solvers
//! invert the constraint totals for `beta` (and `alpha`), relying on the
//! strict monotonic decrease of the totals in each multiplier. The sign
//! convention fixes `beta > 0` throughout.

use crate::combinatorics::StatisticsKind;
use crate::entropy::{total_entropy, OccupationDistribution, OccupationKind};
use crate::error::{Error, Result};

/// Relative tolerance on constraint residuals at a solved multiplier.
pub const RESIDUAL_TOL: f64 = 1e-10;

const MAX_ITERATIONS: u32 = 200;
const BRACKET_EXPANSIONS: u32 = 60;

/// Ordered energy levels: finite, nonnegative, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevels {
    energies: Vec<f64>,
}

impl EnergyLevels {
    /// Validates and sorts the energies into canonical ascending order.
    pub fn new(mut energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::EmptyLevels);
        }
        for (index, &value) in energies.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidEnergy { index, value });
            }
        }
        energies.sort_by(f64::total_cmp);
        Ok(Self { energies })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn max_energy(&self) -> f64 {
        *self.energies.last().expect("at least one level")
    }

    pub fn total_energy_of(&self, occupations: &[f64]) -> f64 {
        self.energies
            .iter()
            .zip(occupations)
            .map(|(e, n)| e * n)
            .sum()
    }
}

/// A solved pair of Lagrange multipliers with the occupations they induce
/// and the residuals certifying the solve.
#[derive(Debug, Clone)]
pub struct LagrangeSolution {
    /// Particle-number multiplier; 0 in Planck mode.
    pub alpha: f64,
    /// Energy multiplier, always positive.
    pub beta: f64,
    pub occupations: OccupationDistribution,
    /// `|U - target| / target`.
    pub energy_residual: f64,
    /// `|P - target| / target`; absent when no particle target was imposed.
    pub particle_residual: Option<f64>,
    /// Max-norm of the Lagrangian gradient at the occupations.
    pub stationarity_residual: f64,
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteParameter { name, value })
    }
}

/// Canonical distribution `p_i = e^{-beta E_i} / Z`.
///
/// The largest exponent is subtracted before exponentiation, so any finite
/// `beta` (including 0 and negative values) is safe from overflow.
pub fn canonical_distribution(levels: &EnergyLevels, beta: f64) -> Result<OccupationDistribution> {
    check_finite("beta", beta)?;
    let shift = levels
        .as_slice()
        .iter()
        .map(|e| -beta * e)
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = levels
        .as_slice()
        .iter()
        .map(|e| (-beta * e - shift).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    OccupationDistribution::new(
        weights.into_iter().map(|w| w / z).collect(),
        OccupationKind::Probability,
    )
}

fn occupation(kind: StatisticsKind, x: f64) -> f64 {
    match kind {
        StatisticsKind::Bosonic => 1.0 / x.exp_m1(),
        StatisticsKind::Exclusion => 1.0 / (x.exp() + 1.0),
    }
}

// d/dx of the occupation laws: -1/(4 sinh^2(x/2)) and -1/(4 cosh^2(x/2)).
fn occupation_derivative(kind: StatisticsKind, x: f64) -> f64 {
    let half = 0.5 * x;
    match kind {
        StatisticsKind::Bosonic => {
            let s = half.sinh();
            -0.25 / (s * s)
        }
        StatisticsKind::Exclusion => {
            let c = half.cosh();
            -0.25 / (c * c)
        }
    }
}

/// Bose-Einstein occupations `n_i = 1 / (e^{alpha + beta E_i} - 1)`.
///
/// Requires `alpha + beta * E_i > 0` on every level; `alpha = 0` is Planck
/// mode, in which a zero energy level is rejected as divergent rather than
/// dropped.
pub fn bosonic_occupation(
    levels: &EnergyLevels,
    beta: f64,
    alpha: f64,
) -> Result<OccupationDistribution> {
    check_finite("beta", beta)?;
    check_finite("alpha", alpha)?;
    let mut values = Vec::with_capacity(levels.len());
    for (index, &e) in levels.as_slice().iter().enumerate() {
        let exponent = alpha + beta * e;
        if exponent <= 0.0 {
            return Err(Error::DivergentOccupation { index, exponent });
        }
        values.push(occupation(StatisticsKind::Bosonic, exponent));
    }
    OccupationDistribution::new(values, OccupationKind::Bosonic)
}

/// Fermi-Dirac occupations `n_i = 1 / (e^{alpha + beta E_i} + 1)`,
/// well-defined for every finite `(alpha, beta)`.
pub fn exclusion_occupation(
    levels: &EnergyLevels,
    beta: f64,
    alpha: f64,
) -> Result<OccupationDistribution> {
    check_finite("beta", beta)?;
    check_finite("alpha", alpha)?;
    let values = levels
        .as_slice()
        .iter()
        .map(|&e| occupation(StatisticsKind::Exclusion, alpha + beta * e))
        .collect();
    OccupationDistribution::new(values, OccupationKind::Exclusion)
}

/// The constrained objective `f = -S + alpha * sum(n) + beta * sum(n E)`,
/// with the entropy functional chosen by the distribution's kind.
/// Planck mode is `alpha = 0`, which removes the particle term.
pub fn objective_value(
    levels: &EnergyLevels,
    occupations: &OccupationDistribution,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    check_finite("alpha", alpha)?;
    check_finite("beta", beta)?;
    if occupations.len() != levels.len() {
        return Err(Error::LengthMismatch {
            occupations: occupations.len(),
            levels: levels.len(),
        });
    }
    let particles = occupations.total();
    let energy = levels.total_energy_of(occupations.values());
    Ok(-total_entropy(occupations) + alpha * particles + beta * energy)
}

/// Max-norm of the analytic Lagrangian gradient at `occupations`:
///
/// ```text
/// probability:  ln p_i + 1 + alpha + beta E_i
/// exclusion:    ln(n_i / (1 - n_i)) + alpha + beta E_i
/// bosonic:      ln(n_i / (n_i + 1)) + alpha + beta E_i
/// ```
///
/// Zero (up to roundoff) exactly at the closed-form occupation laws.
/// Boundary occupations make the gradient non-evaluable and are reported.
pub fn stationarity_residual(
    levels: &EnergyLevels,
    occupations: &OccupationDistribution,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    check_finite("alpha", alpha)?;
    check_finite("beta", beta)?;
    if occupations.len() != levels.len() {
        return Err(Error::LengthMismatch {
            occupations: occupations.len(),
            levels: levels.len(),
        });
    }
    let mut worst = 0.0_f64;
    for (index, (&n, &e)) in occupations
        .values()
        .iter()
        .zip(levels.as_slice())
        .enumerate()
    {
        let gradient = match occupations.kind() {
            OccupationKind::Probability => {
                if n == 0.0 {
                    return Err(Error::BoundaryOccupation { index, value: n });
                }
                n.ln() + 1.0 + alpha + beta * e
            }
            OccupationKind::Exclusion => {
                if n == 0.0 || n == 1.0 {
                    return Err(Error::BoundaryOccupation { index, value: n });
                }
                n.ln() - (-n).ln_1p() + alpha + beta * e
            }
            OccupationKind::Bosonic => {
                if n == 0.0 {
                    return Err(Error::BoundaryOccupation { index, value: n });
                }
                // ln(n / (n + 1)) = -ln(1 + 1/n)
                -(1.0 / n).ln_1p() + alpha + beta * e
            }
        };
        worst = worst.max(gradient.abs());
    }
    Ok(worst)
}

fn totals(levels: &EnergyLevels, kind: StatisticsKind, alpha: f64, beta: f64) -> (f64, f64) {
    let mut particles = 0.0;
    let mut energy = 0.0;
    for &e in levels.as_slice() {
        let n = occupation(kind, alpha + beta * e);
        particles += n;
        energy += n * e;
    }
    (particles, energy)
}

fn total_energy_at(levels: &EnergyLevels, kind: StatisticsKind, alpha: f64, beta: f64) -> f64 {
    totals(levels, kind, alpha, beta).1
}

// Smallest admissible beta for the given alpha (exclusive bound). Bosonic
// occupations need alpha + beta * E_i > 0 on every level.
fn beta_domain_floor(levels: &EnergyLevels, kind: StatisticsKind, alpha: f64) -> Result<f64> {
    match kind {
        StatisticsKind::Exclusion => Ok(0.0),
        StatisticsKind::Bosonic => {
            if levels.min_energy() == 0.0 && alpha <= 0.0 {
                return Err(Error::DivergentOccupation {
                    index: 0,
                    exponent: alpha,
                });
            }
            if alpha < 0.0 {
                Ok(-alpha / levels.min_energy())
            } else {
                Ok(0.0)
            }
        }
    }
}

fn build_solution(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    alpha: f64,
    beta: f64,
    target_energy: f64,
    target_particles: Option<f64>,
) -> Result<LagrangeSolution> {
    let occupations = match kind {
        StatisticsKind::Bosonic => bosonic_occupation(levels, beta, alpha)?,
        StatisticsKind::Exclusion => exclusion_occupation(levels, beta, alpha)?,
    };
    let energy = levels.total_energy_of(occupations.values());
    let particles = occupations.total();
    let stationarity = stationarity_residual(levels, &occupations, alpha, beta)?;
    Ok(LagrangeSolution {
        alpha,
        beta,
        occupations,
        energy_residual: (energy - target_energy).abs() / target_energy,
        particle_residual: target_particles.map(|p| (particles - p).abs() / p),
        stationarity_residual: stationarity,
    })
}

/// Solve the energy constraint for `beta > 0` at a fixed `alpha`:
/// find `beta` with `sum(n_i(beta) E_i) = target_energy` to 1e-10 relative.
///
/// Total energy decreases strictly in `beta`, so the root is isolated by
/// geometric bracket expansion from `beta = 1` (factor-2 steps, at most 60
/// each way), narrowed by bisection to a 1e-12 relative interval, then
/// polished by as many as 5 Newton steps. Deterministic throughout.
pub fn solve_beta(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    target_energy: f64,
    alpha: f64,
) -> Result<LagrangeSolution> {
    check_finite("alpha", alpha)?;
    check_finite("target_energy", target_energy)?;
    if levels.max_energy() == 0.0 {
        return Err(Error::TargetOutOfRange {
            name: "energy",
            target: target_energy,
            lo: 0.0,
            hi: 0.0,
        });
    }
    let floor = beta_domain_floor(levels, kind, alpha)?;
    if target_energy <= 0.0 {
        return Err(Error::TargetOutOfRange {
            name: "energy",
            target: target_energy,
            lo: 0.0,
            hi: attainable_energy_sup(levels, kind, alpha, floor),
        });
    }

    let energy_at = |beta: f64| total_energy_at(levels, kind, alpha, beta);

    // Bracket [lo, hi] with energy(lo) >= target >= energy(hi).
    let start = floor + 1.0;
    let mut value = energy_at(start);
    let (mut lo, mut hi);
    if value >= target_energy {
        lo = start;
        hi = start;
        let mut found = false;
        for _ in 0..BRACKET_EXPANSIONS {
            hi = floor + (hi - floor) * 2.0;
            value = energy_at(hi);
            if value <= target_energy {
                found = true;
                break;
            }
            lo = hi;
        }
        if !found {
            return Err(Error::NoConvergence {
                iterations: BRACKET_EXPANSIONS,
                lo,
                hi,
            });
        }
    } else {
        hi = start;
        lo = start;
        let mut found = false;
        for _ in 0..BRACKET_EXPANSIONS {
            lo = floor + (lo - floor) * 0.5;
            value = energy_at(lo);
            if value >= target_energy {
                found = true;
                break;
            }
            hi = lo;
        }
        if !found {
            // The supremum (approached as beta -> floor) is below the target.
            return Err(Error::TargetOutOfRange {
                name: "energy",
                target: target_energy,
                lo: 0.0,
                hi: attainable_energy_sup(levels, kind, alpha, floor),
            });
        }
    }

    let mut iterations = 0_u32;
    while hi - lo > 1e-12 * hi {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence { iterations, lo, hi });
        }
        let mid = 0.5 * (lo + hi);
        if energy_at(mid) >= target_energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut beta = 0.5 * (lo + hi);
    for _ in 0..5 {
        let residual = energy_at(beta) - target_energy;
        if residual.abs() <= RESIDUAL_TOL * target_energy {
            break;
        }
        let slope: f64 = levels
            .as_slice()
            .iter()
            .map(|&e| e * e * occupation_derivative(kind, alpha + beta * e))
            .sum();
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = beta - residual / slope;
        beta = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }

    if (energy_at(beta) - target_energy).abs() > RESIDUAL_TOL * target_energy {
        return Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
            lo,
            hi,
        });
    }
    build_solution(levels, kind, alpha, beta, target_energy, None)
}

// Supremum of the attainable total energy as beta approaches its domain
// floor. Infinite when an occupation diverges there.
fn attainable_energy_sup(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    alpha: f64,
    floor: f64,
) -> f64 {
    match kind {
        StatisticsKind::Exclusion => {
            // beta -> 0: n_i -> 1/(e^alpha + 1) on every level.
            occupation(kind, alpha) * levels.as_slice().iter().sum::<f64>()
        }
        StatisticsKind::Bosonic => {
            if alpha > 0.0 && floor == 0.0 {
                occupation(kind, alpha) * levels.as_slice().iter().sum::<f64>()
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Solve both constraints for `(alpha, beta)`:
/// `sum(n_i) = target_particles` and `sum(n_i E_i) = target_energy`,
/// each to 1e-10 relative.
///
/// A damped 2-D Newton iteration on the residual map is tried first; on a
/// singular Jacobian or stalled damping it falls back to nested 1-D solves
/// (bisection over `alpha`, with [`solve_beta`] inverting the energy
/// constraint at each trial `alpha`).
pub fn solve_alpha_beta(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    target_energy: f64,
    target_particles: f64,
) -> Result<LagrangeSolution> {
    check_finite("target_energy", target_energy)?;
    check_finite("target_particles", target_particles)?;
    if target_energy <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "target_energy",
            value: target_energy,
        });
    }
    if target_particles <= 0.0 {
        return Err(Error::NonPositiveParameter {
            name: "target_particles",
            value: target_particles,
        });
    }
    if kind == StatisticsKind::Exclusion && target_particles >= levels.len() as f64 {
        return Err(Error::InfeasibleTargets {
            particles: target_particles,
            energy: target_energy,
            detail: format!(
                "exclusion statistics holds fewer than {} particles in {} states",
                levels.len(),
                levels.len()
            ),
        });
    }

    if let Some(solution) = newton_2d(levels, kind, target_energy, target_particles) {
        return solution;
    }
    nested_solve(levels, kind, target_energy, target_particles)
}

// Damped Newton on (P, U) residuals. Returns None to request the fallback.
fn newton_2d(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    target_energy: f64,
    target_particles: f64,
) -> Option<Result<LagrangeSolution>> {
    let zero_floor = kind == StatisticsKind::Bosonic && levels.min_energy() == 0.0;
    let mut alpha = if zero_floor { 1.0 } else { 0.0 };
    let mut beta = 1.0_f64;

    let in_domain = |alpha: f64, beta: f64| {
        beta > 0.0
            && match kind {
                StatisticsKind::Exclusion => true,
                StatisticsKind::Bosonic => alpha + beta * levels.min_energy() > 0.0,
            }
    };
    let norm = |alpha: f64, beta: f64| {
        let (p, u) = totals(levels, kind, alpha, beta);
        let rp = (p - target_particles) / target_particles;
        let ru = (u - target_energy) / target_energy;
        (rp * rp + ru * ru).sqrt()
    };

    let mut residual = norm(alpha, beta);
    for _ in 0..60 {
        let (p, u) = totals(levels, kind, alpha, beta);
        let rp = p - target_particles;
        let ru = u - target_energy;
        if rp.abs() <= RESIDUAL_TOL * target_particles && ru.abs() <= RESIDUAL_TOL * target_energy {
            return Some(build_solution(
                levels,
                kind,
                alpha,
                beta,
                target_energy,
                Some(target_particles),
            ));
        }

        let mut j_pp = 0.0;
        let mut j_pu = 0.0;
        let mut j_uu = 0.0;
        for &e in levels.as_slice() {
            let d = occupation_derivative(kind, alpha + beta * e);
            j_pp += d;
            j_pu += e * d;
            j_uu += e * e * d;
        }
        let det = j_pp * j_uu - j_pu * j_pu;
        let scale = j_pp.abs().max(j_pu.abs()).max(j_uu.abs());
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
            return None;
        }
        let d_alpha = -(j_uu * rp - j_pu * ru) / det;
        let d_beta = -(j_pp * ru - j_pu * rp) / det;

        let mut lambda = 1.0;
        let mut stepped = false;
        while lambda >= 1.0 / 4096.0 {
            let a = alpha + lambda * d_alpha;
            let b = beta + lambda * d_beta;
            if in_domain(a, b) {
                let r = norm(a, b);
                if r < residual {
                    alpha = a;
                    beta = b;
                    residual = r;
                    stepped = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !stepped {
            return None;
        }
    }
    None
}

// Nested 1-D inversion: bisection over alpha on the particle residual, with
// the energy constraint re-solved for beta at every trial alpha. The
// particle total at energy-feasible multipliers decreases strictly in alpha.
fn nested_solve(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    target_energy: f64,
    target_particles: f64,
) -> Result<LagrangeSolution> {
    let zero_floor = kind == StatisticsKind::Bosonic && levels.min_energy() == 0.0;

    // Particle surplus at alpha; None when the energy target is unattainable
    // there, which means alpha is too large.
    let surplus = |alpha: f64| -> Result<Option<f64>> {
        match solve_beta(levels, kind, target_energy, alpha) {
            Ok(solution) => Ok(Some(solution.occupations.total() - target_particles)),
            Err(Error::TargetOutOfRange { .. }) => Ok(None),
            Err(other) => Err(other),
        }
    };

    let start = if zero_floor { 1.0 } else { 0.0 };
    let start_surplus = surplus(start)?;

    // Establish [alpha_lo, alpha_hi] with surplus(lo) >= 0 >= surplus(hi).
    let mut lo;
    let mut hi;
    match start_surplus {
        Some(0.0) => {
            return build_solution_checked(levels, kind, start, target_energy, target_particles);
        }
        Some(s) if s > 0.0 => {
            lo = start;
            hi = start;
            let mut found = false;
            for _ in 0..BRACKET_EXPANSIONS {
                hi = if hi == 0.0 { 1.0 } else { hi * 2.0 };
                match surplus(hi)? {
                    Some(s) if s <= 0.0 => {
                        found = true;
                        break;
                    }
                    Some(_) => lo = hi,
                    // Energy target unattainable: alpha went too far up.
                    None => {
                        found = true;
                        break;
                    }
                }
            }
            if !found {
                return Err(Error::InfeasibleTargets {
                    particles: target_particles,
                    energy: target_energy,
                    detail: format!("particle total still exceeds the target at alpha = {hi}"),
                });
            }
        }
        _ => {
            // Too few particles (or energy unattainable): move alpha down.
            hi = start;
            lo = start;
            let mut found = false;
            for _ in 0..BRACKET_EXPANSIONS {
                // With a zero level alpha must stay positive; otherwise walk
                // into negative alpha by doubling.
                lo = if zero_floor {
                    lo * 0.5
                } else if lo == 0.0 {
                    -1.0
                } else {
                    lo * 2.0
                };
                match surplus(lo)? {
                    Some(s) if s >= 0.0 => {
                        found = true;
                        break;
                    }
                    _ => hi = lo,
                }
            }
            if !found {
                return Err(Error::InfeasibleTargets {
                    particles: target_particles,
                    energy: target_energy,
                    detail: format!("particle total still below the target at alpha = {lo}"),
                });
            }
        }
    }

    let mut iterations = 0_u32;
    loop {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::NoConvergence { iterations, lo, hi });
        }
        let mid = 0.5 * (lo + hi);
        match surplus(mid)? {
            Some(s) if s.abs() <= RESIDUAL_TOL * target_particles => {
                return build_solution_checked(levels, kind, mid, target_energy, target_particles);
            }
            Some(s) if s > 0.0 => lo = mid,
            _ => hi = mid,
        }
        if (hi - lo).abs() <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
            return Err(Error::NoConvergence { iterations, lo, hi });
        }
    }
}

fn build_solution_checked(
    levels: &EnergyLevels,
    kind: StatisticsKind,
    alpha: f64,
    target_energy: f64,
    target_particles: f64,
) -> Result<LagrangeSolution> {
    let inner = solve_beta(levels, kind, target_energy, alpha)?;
    build_solution(
        levels,
        kind,
        alpha,
        inner.beta,
        target_energy,
        Some(target_particles),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn levels(values: &[f64]) -> EnergyLevels {
        EnergyLevels::new(values.to_vec()).unwrap()
    }

    #[test]
    fn levels_sorted_and_validated() {
        let l = levels(&[3.0, 1.0, 2.0]);
        assert_eq!(l.as_slice(), &[1.0, 2.0, 3.0]);
        assert!(matches!(
            EnergyLevels::new(vec![1.0, -0.5]),
            Err(Error::InvalidEnergy { index: 1, .. })
        ));
        assert!(matches!(EnergyLevels::new(vec![]), Err(Error::EmptyLevels)));
        assert!(matches!(
            EnergyLevels::new(vec![f64::INFINITY]),
            Err(Error::InvalidEnergy { .. })
        ));
    }

    #[test]
    fn canonical_equal_energies_uniform() {
        let l = levels(&[2.0, 2.0, 2.0]);
        let p = canonical_distribution(&l, 1.7).unwrap();
        for &v in p.values() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_beta_zero_uniform() {
        let l = levels(&[0.0, 1.0, 5.0, 9.0]);
        let p = canonical_distribution(&l, 0.0).unwrap();
        for &v in p.values() {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_two_level_ln2() {
        // E = (0, 1), beta = ln 2 => p = (2/3, 1/3).
        let l = levels(&[0.0, 1.0]);
        let p = canonical_distribution(&l, LN_2).unwrap();
        assert!((p.values()[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((p.values()[1] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn canonical_survives_extreme_beta() {
        let l = levels(&[0.0, 1000.0]);
        let p = canonical_distribution(&l, 5.0).unwrap();
        assert!((p.total() - 1.0).abs() < 1e-12);
        let p = canonical_distribution(&l, -5.0).unwrap();
        assert!((p.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bosonic_unit_occupation_at_ln2() {
        let l = levels(&[1.0]);
        let n = bosonic_occupation(&l, LN_2, 0.0).unwrap();
        assert!((n.values()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bosonic_at_unit_exponent() {
        // n(1) = 1/(e - 1), about 0.582.
        let l = levels(&[1.0]);
        let n = bosonic_occupation(&l, 1.0, 0.0).unwrap();
        let direct = 1.0 / (std::f64::consts::E - 1.0);
        assert!((n.values()[0] - direct).abs() < 1e-15);
        assert!((n.values()[0] - 0.581_976_706_869_326_4).abs() < 1e-15);
    }

    #[test]
    fn bosonic_canonical_tail() {
        let l = levels(&[20.0]);
        let n = bosonic_occupation(&l, 1.0, 0.0).unwrap();
        let canonical = (-20.0_f64).exp();
        assert!((n.values()[0] - canonical).abs() / canonical < 1e-8);
    }

    #[test]
    fn bosonic_divergence_names_level() {
        let l = levels(&[0.0, 1.0]);
        let err = bosonic_occupation(&l, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::DivergentOccupation { index: 0, .. }));
        let l = levels(&[1.0, 2.0]);
        let err = bosonic_occupation(&l, 0.5, -1.0).unwrap_err();
        assert!(matches!(err, Error::DivergentOccupation { index: 0, .. }));
    }

    #[test]
    fn exclusion_midpoint_and_tail() {
        let l = levels(&[0.0]);
        let n = exclusion_occupation(&l, 1.0, 0.0).unwrap();
        assert!((n.values()[0] - 0.5).abs() < 1e-15);

        // alpha + beta E = ln 3 => n = 1/4
        let l = levels(&[1.0]);
        let n = exclusion_occupation(&l, 3.0_f64.ln(), 0.0).unwrap();
        assert!((n.values()[0] - 0.25).abs() < 1e-15);

        let n = exclusion_occupation(&l, 800.0, 0.0).unwrap();
        assert_eq!(n.values()[0], 0.0); // asymptote, underflows cleanly
    }

    #[test]
    fn duality_of_occupation_forms() {
        // 1/n_exclusion - 1/n_bosonic = 2 at any shared exponent.
        for x in [0.05, 0.3, 1.0, 4.0, 6.0] {
            let bos = occupation(StatisticsKind::Bosonic, x);
            let exc = occupation(StatisticsKind::Exclusion, x);
            assert!((1.0 / exc - 1.0 / bos - 2.0).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn stationarity_zero_at_occupation_laws() {
        let l = levels(&[0.5, 1.0, 2.5]);
        let (alpha, beta) = (0.3, 1.2);
        let bos = bosonic_occupation(&l, beta, alpha).unwrap();
        assert!(stationarity_residual(&l, &bos, alpha, beta).unwrap() < 1e-12);
        let exc = exclusion_occupation(&l, beta, alpha).unwrap();
        assert!(stationarity_residual(&l, &exc, alpha, beta).unwrap() < 1e-12);
    }

    #[test]
    fn stationarity_zero_for_canonical_with_log_z_alpha() {
        // For p = e^{-beta E}/Z the gradient vanishes at alpha = ln Z - 1.
        let l = levels(&[0.0, 1.0, 3.0]);
        let beta = 0.8;
        let p = canonical_distribution(&l, beta).unwrap();
        let z: f64 = l.as_slice().iter().map(|e| (-beta * e).exp()).sum();
        let alpha = z.ln() - 1.0;
        assert!(stationarity_residual(&l, &p, alpha, beta).unwrap() < 1e-12);
    }

    #[test]
    fn stationarity_detects_perturbation() {
        let l = levels(&[1.0, 2.0]);
        let bos = bosonic_occupation(&l, 1.0, 0.0).unwrap();
        let mut values = bos.values().to_vec();
        values[0] += 0.01;
        let perturbed = OccupationDistribution::new(values, OccupationKind::Bosonic).unwrap();
        assert!(stationarity_residual(&l, &perturbed, 0.0, 1.0).unwrap() > 1e-3);
    }

    #[test]
    fn stationarity_boundary_reported() {
        let l = levels(&[1.0]);
        let d = OccupationDistribution::new(vec![0.0], OccupationKind::Bosonic).unwrap();
        assert!(matches!(
            stationarity_residual(&l, &d, 0.0, 1.0),
            Err(Error::BoundaryOccupation { index: 0, .. })
        ));
    }

    #[test]
    fn objective_zero_at_vacuum() {
        let l = levels(&[1.0, 2.0]);
        let d = OccupationDistribution::new(vec![0.0, 0.0], OccupationKind::Bosonic).unwrap();
        assert_eq!(objective_value(&l, &d, 0.0, 1.3).unwrap(), 0.0);
    }

    #[test]
    fn objective_stationary_self_consistency() {
        let l = levels(&[1.0, 2.0, 3.0]);
        let (alpha, beta) = (0.2, 0.9);
        let sol = bosonic_occupation(&l, beta, alpha).unwrap();
        let f0 = objective_value(&l, &sol, alpha, beta).unwrap();
        // Perturbing by zero changes nothing.
        let again = objective_value(&l, &sol, alpha, beta).unwrap();
        assert_eq!(f0, again);
    }

    #[test]
    fn solve_beta_single_level_ln2() {
        // E = (1), target n = 1 => U = 1, beta = ln 2.
        let l = levels(&[1.0]);
        let sol = solve_beta(&l, StatisticsKind::Bosonic, 1.0, 0.0).unwrap();
        assert!((sol.beta - LN_2).abs() < 1e-10);
        assert!(sol.energy_residual <= RESIDUAL_TOL);
        assert!(sol.stationarity_residual < 1e-8);
        assert!(sol.particle_residual.is_none());
    }

    #[test]
    fn solve_beta_two_level_bosonic() {
        // Frozen from an independent 1e-14 bisection on
        // 1/(e^b - 1) + 2/(e^{2b} - 1) = 1.
        let l = levels(&[1.0, 2.0]);
        let sol = solve_beta(&l, StatisticsKind::Bosonic, 1.0, 0.0).unwrap();
        let expected = 0.940_613_642_107_208_8;
        assert!(
            (sol.beta - expected).abs() < 1e-9,
            "beta = {}, expected {expected}",
            sol.beta
        );
        assert!(sol.energy_residual <= RESIDUAL_TOL);
    }

    #[test]
    fn solve_beta_exclusion_ln3() {
        // E = (0, 1), target U = 0.25: n(E=1) = 1/(e^b + 1) = 1/4 => b = ln 3.
        let l = levels(&[0.0, 1.0]);
        let sol = solve_beta(&l, StatisticsKind::Exclusion, 0.25, 0.0).unwrap();
        assert!((sol.beta - 3.0_f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn solve_beta_round_trip() {
        let l = levels(&[0.5, 1.0, 1.5, 4.0]);
        for target in [0.05, 0.4, 2.0, 30.0] {
            let sol = solve_beta(&l, StatisticsKind::Bosonic, target, 0.1).unwrap();
            let energy = l.total_energy_of(sol.occupations.values());
            assert!(
                (energy - target).abs() <= RESIDUAL_TOL * target,
                "target {target}: got {energy}"
            );
        }
    }

    #[test]
    fn solve_beta_rejects_unattainable_target() {
        // Exclusion with alpha = 0 caps the energy at sum(E)/2 as beta -> 0.
        let l = levels(&[1.0, 2.0]);
        let err = solve_beta(&l, StatisticsKind::Exclusion, 2.0, 0.0).unwrap_err();
        match err {
            Error::TargetOutOfRange { target, hi, .. } => {
                assert_eq!(target, 2.0);
                assert!((hi - 1.5).abs() < 1e-12, "sup should be 1.5, got {hi}");
            }
            other => panic!("expected TargetOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn solve_beta_planck_mode_rejects_zero_level() {
        let l = levels(&[0.0, 1.0]);
        assert!(matches!(
            solve_beta(&l, StatisticsKind::Bosonic, 1.0, 0.0),
            Err(Error::DivergentOccupation { index: 0, .. })
        ));
    }

    #[test]
    fn energy_decreases_in_beta() {
        let l = levels(&[0.3, 1.0, 2.2]);
        for kind in [StatisticsKind::Bosonic, StatisticsKind::Exclusion] {
            let mut prev = f64::INFINITY;
            for k in 0..50 {
                let beta = 0.05 * (k + 1) as f64;
                let u = total_energy_at(&l, kind, 0.2, beta);
                assert!(u < prev, "{kind} at beta = {beta}");
                prev = u;
            }
        }
    }

    #[test]
    fn canonical_limit_of_both_statistics() {
        for x in [5.0_f64, 7.5, 10.0, 20.0] {
            let tail = (-x).exp();
            let bos = occupation(StatisticsKind::Bosonic, x);
            let exc = occupation(StatisticsKind::Exclusion, x);
            assert!((bos - tail).abs() / tail < 0.01, "bosonic at {x}");
            assert!((exc - tail).abs() / tail < 0.01, "exclusion at {x}");
        }
    }

    #[test]
    fn solve_alpha_beta_symmetric_two_level() {
        // Equal energies: only alpha + beta E is identified; the solver must
        // still satisfy alpha + beta = ln(1 + 1/n*) for the target built
        // from occupation n*.
        let l = levels(&[1.0, 1.0]);
        let n_star = 0.7;
        let sol =
            solve_alpha_beta(&l, StatisticsKind::Bosonic, 2.0 * n_star, 2.0 * n_star).unwrap();
        let expected = (1.0 + 1.0 / n_star).ln();
        assert!((sol.alpha + sol.beta - expected).abs() < 1e-9);
        assert!(sol.energy_residual <= RESIDUAL_TOL);
        assert!(sol.particle_residual.unwrap() <= RESIDUAL_TOL);
    }

    #[test]
    fn solve_alpha_beta_three_level_bosonic() {
        // Frozen from an independent high-precision 2-D root find.
        let l = levels(&[1.0, 2.0, 3.0]);
        let sol = solve_alpha_beta(&l, StatisticsKind::Bosonic, 2.5, 1.5).unwrap();
        assert!(
            (sol.alpha - 0.476_837_523_390_952_84).abs() < 1e-8,
            "alpha = {}",
            sol.alpha
        );
        assert!(
            (sol.beta - 0.350_180_003_262_703_02).abs() < 1e-8,
            "beta = {}",
            sol.beta
        );
        assert!(sol.energy_residual <= RESIDUAL_TOL);
        assert!(sol.particle_residual.unwrap() <= RESIDUAL_TOL);
        assert!(sol.stationarity_residual < 1e-8);
    }

    #[test]
    fn solve_alpha_beta_exclusion_half_filled() {
        // E = (1, 2) with P = 1 forces n = (1-t, t); closed form at U = 1.4:
        // beta = 2 ln(3/2), alpha = -3 ln(3/2) = -1.5 beta.
        let l = levels(&[1.0, 2.0]);
        let sol = solve_alpha_beta(&l, StatisticsKind::Exclusion, 1.4, 1.0).unwrap();
        let ln_3_2 = 1.5_f64.ln();
        assert!(
            (sol.beta - 2.0 * ln_3_2).abs() < 1e-9,
            "beta = {}",
            sol.beta
        );
        assert!(
            (sol.alpha + 3.0 * ln_3_2).abs() < 1e-9,
            "alpha = {}",
            sol.alpha
        );
        assert!((sol.alpha + 1.5 * sol.beta).abs() < 1e-8);
    }

    #[test]
    fn solve_alpha_beta_boundary_target_presses_beta_to_zero() {
        // E = (1, 2), P = 1, U = 1.5 is exactly solved only by beta = 0,
        // which the convention beta > 0 excludes. Within the 1e-10 residual
        // tolerance the solver may still satisfy the targets at a vanishing
        // positive beta; otherwise it must report the infeasibility.
        let l = levels(&[1.0, 2.0]);
        match solve_alpha_beta(&l, StatisticsKind::Exclusion, 1.5, 1.0) {
            Ok(sol) => {
                assert!(sol.beta > 0.0 && sol.beta < 1e-10, "beta = {}", sol.beta);
                assert!(sol.energy_residual <= RESIDUAL_TOL);
                assert!(sol.particle_residual.unwrap() <= RESIDUAL_TOL);
            }
            Err(err) => assert!(
                matches!(
                    err,
                    Error::InfeasibleTargets { .. } | Error::NoConvergence { .. }
                ),
                "got {err:?}"
            ),
        }
    }

    #[test]
    fn solve_alpha_beta_rejects_overfilled_exclusion() {
        let l = levels(&[1.0, 2.0]);
        assert!(matches!(
            solve_alpha_beta(&l, StatisticsKind::Exclusion, 1.0, 2.5),
            Err(Error::InfeasibleTargets { .. })
        ));
    }

    #[test]
    fn solve_alpha_beta_round_trip_bosonic_with_zero_level() {
        // A zero energy level forces alpha > 0 throughout the solve.
        let l = levels(&[0.0, 1.0, 2.0]);
        let reference = bosonic_occupation(&l, 1.0, 0.5).unwrap();
        let p = reference.total();
        let u = l.total_energy_of(reference.values());
        let sol = solve_alpha_beta(&l, StatisticsKind::Bosonic, u, p).unwrap();
        assert!((sol.alpha - 0.5).abs() < 1e-8, "alpha = {}", sol.alpha);
        assert!((sol.beta - 1.0).abs() < 1e-8, "beta = {}", sol.beta);
    }
}
