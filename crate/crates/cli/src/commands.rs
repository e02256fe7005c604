//! One function per subcommand, each rendering its result in the selected
//! format and reporting whether the run counts as a pass (only `verify`
//! ever reports failure while still producing output).

use std::fmt::Write as _;

use boltzlab::analysis::{benford_frequencies, figure1_table, numeric_slope, BenfordMode};
use boltzlab::combinatorics::{
    count_microstates, stirling_entropy, stirling_relative_error, EnsembleSpec, StatisticsKind,
};
use boltzlab::entropy::{low_occupation_deviation, total_entropy, OccupationDistribution};
use boltzlab::maxent::{
    bosonic_occupation, exclusion_occupation, solve_alpha_beta, solve_beta, EnergyLevels,
    LagrangeSolution,
};
use boltzlab::oracle::{enumerate_occupations, grid_search_maxent, perturbation_test};
use boltzlab::{analytic_slope, OccupationKind};

use crate::output::{fnum, jarr, jbool, jnum, jobj, jstr, OutputFormat};
use crate::parse::{parse_levels, parse_values};
use crate::{
    BenfordArgs, CliError, CountArgs, EntropyArgs, Figure1Args, KindArg, OccupationKindArg,
    SlopeArgs, SolveArgs, VerifyArgs, VerifyCheck,
};

pub type CommandOutput = (String, bool);

impl KindArg {
    fn to_kind(self) -> StatisticsKind {
        match self {
            KindArg::Exclusion => StatisticsKind::Exclusion,
            KindArg::Bosonic => StatisticsKind::Bosonic,
        }
    }
}

impl OccupationKindArg {
    fn to_kind(self) -> OccupationKind {
        match self {
            OccupationKindArg::Probability => OccupationKind::Probability,
            OccupationKindArg::Exclusion => OccupationKind::Exclusion,
            OccupationKindArg::Bosonic => OccupationKind::Bosonic,
        }
    }
}

pub fn count(args: &CountArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let spec = EnsembleSpec::new(args.states, args.particles, args.kind.to_kind())?;
    let count = count_microstates(&spec);
    let exact = count.exact().map(|w| w.to_string());
    let content = match format {
        OutputFormat::Plain => match &exact {
            Some(w) => format!("{w}\n"),
            None => format!(
                "exact count not materialized (n_states + n_particles > {}); ln W = {}\n",
                boltzlab::EXACT_COUNT_LIMIT,
                fnum(count.log_value())
            ),
        },
        OutputFormat::Csv => format!(
            "n_states,n_particles,kind,exact,ln_w\n{},{},{},{},{}\n",
            args.states,
            args.particles,
            args.kind.to_kind(),
            exact.as_deref().unwrap_or(""),
            fnum(count.log_value())
        ),
        OutputFormat::Json => {
            let exact_json = exact.map_or("null".to_string(), |w| jstr(&w));
            let obj = jobj(&[
                ("n_states", args.states.to_string()),
                ("n_particles", args.particles.to_string()),
                ("kind", jstr(&args.kind.to_kind().to_string())),
                ("exact", exact_json),
                ("ln_w", jnum(count.log_value())),
            ]);
            format!("{obj}\n")
        }
    };
    Ok((content, true))
}

pub fn stirling(args: &CountArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let spec = EnsembleSpec::new(args.states, args.particles, args.kind.to_kind())?;
    let entropy = stirling_entropy(&spec);
    let ln_w = count_microstates(&spec).log_value();
    let error = stirling_relative_error(&spec);
    let error_kind = if ln_w == 0.0 { "absolute" } else { "relative" };
    let content = match format {
        OutputFormat::Plain => format!(
            "stirling_entropy = {}\nln_w = {}\nerror = {}\nerror_kind = {}\n",
            fnum(entropy),
            fnum(ln_w),
            fnum(error),
            error_kind
        ),
        OutputFormat::Csv => format!(
            "n_states,n_particles,kind,stirling_entropy,ln_w,error,error_kind\n{},{},{},{},{},{},{}\n",
            args.states,
            args.particles,
            args.kind.to_kind(),
            fnum(entropy),
            fnum(ln_w),
            fnum(error),
            error_kind
        ),
        OutputFormat::Json => {
            let obj = jobj(&[
                ("n_states", args.states.to_string()),
                ("n_particles", args.particles.to_string()),
                ("kind", jstr(&args.kind.to_kind().to_string())),
                ("stirling_entropy", jnum(entropy)),
                ("ln_w", jnum(ln_w)),
                ("error", jnum(error)),
                ("error_kind", jstr(error_kind)),
            ]);
            format!("{obj}\n")
        }
    };
    Ok((content, true))
}

pub fn entropy(args: &EntropyArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let values = parse_values(&args.values)?;
    let dist = OccupationDistribution::new(values, args.kind.to_kind())?;
    let (name, value) = if args.deviation {
        let statistics = match args.kind {
            OccupationKindArg::Exclusion => StatisticsKind::Exclusion,
            OccupationKindArg::Bosonic => StatisticsKind::Bosonic,
            OccupationKindArg::Probability => {
                return Err(CliError::Usage(
                    "--deviation compares the exclusion or bosonic form; \
                     pass --kind exclusion or --kind bosonic"
                        .into(),
                ))
            }
        };
        (
            "low_occupation_deviation",
            low_occupation_deviation(&dist, statistics)?,
        )
    } else {
        ("entropy", total_entropy(&dist))
    };
    let content = match format {
        OutputFormat::Plain => format!("{}\n", fnum(value)),
        OutputFormat::Csv => format!(
            "kind,n_states,{name}\n{},{},{}\n",
            dist.kind(),
            dist.len(),
            fnum(value)
        ),
        OutputFormat::Json => {
            let obj = jobj(&[
                ("kind", jstr(&dist.kind().to_string())),
                ("n_states", dist.len().to_string()),
                (name, jnum(value)),
            ]);
            format!("{obj}\n")
        }
    };
    Ok((content, true))
}

fn render_solution(
    levels: &EnergyLevels,
    solution: &LagrangeSolution,
    mode: &str,
    kind: StatisticsKind,
    format: OutputFormat,
) -> String {
    let occupations = solution.occupations.values();
    let entropy = total_entropy(&solution.occupations);
    let total_particles = solution.occupations.total();
    let total_energy = levels.total_energy_of(occupations);
    match format {
        OutputFormat::Json => {
            let residuals = jobj(&[
                ("energy", jnum(solution.energy_residual)),
                (
                    "particles",
                    solution.particle_residual.map_or("null".to_string(), jnum),
                ),
                ("stationarity", jnum(solution.stationarity_residual)),
            ]);
            let obj = jobj(&[
                ("mode", jstr(mode)),
                ("kind", jstr(&kind.to_string())),
                ("alpha", jnum(solution.alpha)),
                ("beta", jnum(solution.beta)),
                ("occupations", jarr(occupations.iter().map(|&n| jnum(n)))),
                ("residuals", residuals),
                ("entropy", jnum(entropy)),
                ("total_particles", jnum(total_particles)),
                ("total_energy", jnum(total_energy)),
            ]);
            format!("{obj}\n")
        }
        OutputFormat::Plain => {
            let mut out = String::new();
            let _ = writeln!(out, "mode = {mode}");
            let _ = writeln!(out, "kind = {kind}");
            let _ = writeln!(out, "alpha = {}", fnum(solution.alpha));
            let _ = writeln!(out, "beta = {}", fnum(solution.beta));
            let list: Vec<String> = occupations.iter().map(|&n| fnum(n)).collect();
            let _ = writeln!(out, "occupations = {}", list.join(", "));
            let _ = writeln!(out, "energy_residual = {}", fnum(solution.energy_residual));
            match solution.particle_residual {
                Some(r) => {
                    let _ = writeln!(out, "particle_residual = {}", fnum(r));
                }
                None => {
                    let _ = writeln!(out, "particle_residual = n/a");
                }
            }
            let _ = writeln!(
                out,
                "stationarity_residual = {}",
                fnum(solution.stationarity_residual)
            );
            let _ = writeln!(out, "entropy = {}", fnum(entropy));
            let _ = writeln!(out, "total_particles = {}", fnum(total_particles));
            let _ = writeln!(out, "total_energy = {}", fnum(total_energy));
            out
        }
        OutputFormat::Csv => {
            let mut out = String::from("index,energy,occupation,alpha,beta\n");
            for (i, (&e, &n)) in levels.as_slice().iter().zip(occupations).enumerate() {
                let _ = writeln!(
                    out,
                    "{i},{},{},{},{}",
                    fnum(e),
                    fnum(n),
                    fnum(solution.alpha),
                    fnum(solution.beta)
                );
            }
            out
        }
    }
}

pub fn solve(args: &SolveArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let levels = parse_levels(&args.levels)?;
    let kind = args.kind.to_kind();
    let scale = if args.per_state {
        levels.len() as f64
    } else {
        1.0
    };
    let target_energy = args.energy * scale;
    let (mode, solution) = match (args.alpha, args.particles) {
        (Some(alpha), None) => (
            "fixed-alpha",
            solve_beta(&levels, kind, target_energy, alpha)?,
        ),
        (None, Some(particles)) => (
            "solved-alpha",
            solve_alpha_beta(&levels, kind, target_energy, particles * scale)?,
        ),
        (None, None) => {
            return Err(CliError::Usage(
                "provide --alpha (fixed-alpha mode) or --particles (solved-alpha mode)".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap forbids --alpha with --particles"),
    };
    Ok((
        render_solution(&levels, &solution, mode, kind, format),
        true,
    ))
}

pub fn verify(
    args: &VerifyArgs,
    format: OutputFormat,
    seed: u64,
) -> Result<CommandOutput, CliError> {
    match args.check {
        VerifyCheck::Enumeration => verify_enumeration(args, format),
        VerifyCheck::Grid => verify_grid(args, format),
        VerifyCheck::Perturbation => verify_perturbation(args, format, seed),
    }
}

fn verify_enumeration(args: &VerifyArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    use num_traits::ToPrimitive;
    let mut cases = 0_u64;
    let mut failures: Vec<String> = Vec::new();
    let mut rows = String::new();
    for kind in [StatisticsKind::Exclusion, StatisticsKind::Bosonic] {
        for n in 1..=args.max_states {
            for p in 0..=args.max_particles {
                let Ok(spec) = EnsembleSpec::new(n, p, kind) else {
                    continue;
                };
                let enumerated = enumerate_occupations(&spec)?.count() as u64;
                let counted = count_microstates(&spec)
                    .exact()
                    .expect("guarded sizes are exact")
                    .to_u64()
                    .expect("guarded counts fit in u64");
                cases += 1;
                let matched = enumerated == counted;
                if !matched {
                    failures.push(format!("N={n} P={p} {kind}: {counted} vs {enumerated}"));
                }
                if format == OutputFormat::Csv {
                    let _ = writeln!(rows, "{n},{p},{kind},{counted},{enumerated},{matched}");
                }
            }
        }
    }
    let passed = failures.is_empty();
    let content = match format {
        OutputFormat::Json => {
            let obj = jobj(&[
                ("check", jstr("enumeration")),
                ("max_states", args.max_states.to_string()),
                ("max_particles", args.max_particles.to_string()),
                ("cases", cases.to_string()),
                ("failures", jarr(failures.iter().map(|f| jstr(f)))),
                ("passed", jbool(passed)),
            ]);
            format!("{obj}\n")
        }
        OutputFormat::Csv => format!("n_states,n_particles,kind,count,enumerated,match\n{rows}"),
        OutputFormat::Plain => format!(
            "check = enumeration\ncases = {cases}\nfailures = {}\npassed = {passed}\n",
            failures.len()
        ),
    };
    Ok((content, passed))
}

fn verify_grid(args: &VerifyArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let levels = parse_levels(
        args.levels
            .as_deref()
            .ok_or_else(|| CliError::Usage("--check grid needs --levels".into()))?,
    )?;
    let kind = args.kind.to_kind();
    let reference = match kind {
        StatisticsKind::Bosonic => bosonic_occupation(&levels, args.beta, args.alpha)?,
        StatisticsKind::Exclusion => exclusion_occupation(&levels, args.beta, args.alpha)?,
    };
    let target_particles = reference.total();
    let target_energy = levels.total_energy_of(reference.values());
    let outcome = grid_search_maxent(&levels, kind, target_energy, target_particles, args.step)?;
    let max_gap = outcome
        .occupations
        .values()
        .iter()
        .zip(reference.values())
        .map(|(g, r)| (g - r).abs())
        .fold(0.0_f64, f64::max);
    let threshold = 2.0 * args.step;
    let passed = max_gap <= threshold;
    let content = match format {
        OutputFormat::Json => {
            let targets = jobj(&[
                ("particles", jnum(target_particles)),
                ("energy", jnum(target_energy)),
            ]);
            let obj = jobj(&[
                ("check", jstr("grid")),
                ("kind", jstr(&kind.to_string())),
                ("alpha", jnum(args.alpha)),
                ("beta", jnum(args.beta)),
                ("step", jnum(args.step)),
                ("tolerance", jnum(outcome.tolerance)),
                ("targets", targets),
                (
                    "analytic",
                    jarr(reference.values().iter().map(|&v| jnum(v))),
                ),
                (
                    "grid",
                    jarr(outcome.occupations.values().iter().map(|&v| jnum(v))),
                ),
                ("feasible_points", outcome.feasible_points.to_string()),
                ("ties", outcome.ties.len().to_string()),
                ("max_abs_gap", jnum(max_gap)),
                ("threshold", jnum(threshold)),
                ("passed", jbool(passed)),
            ]);
            format!("{obj}\n")
        }
        OutputFormat::Csv => {
            let mut out = String::from("index,analytic,grid,abs_gap\n");
            for (i, (r, g)) in reference
                .values()
                .iter()
                .zip(outcome.occupations.values())
                .enumerate()
            {
                let _ = writeln!(out, "{i},{},{},{}", fnum(*r), fnum(*g), fnum((g - r).abs()));
            }
            out
        }
        OutputFormat::Plain => format!(
            "check = grid\nmax_abs_gap = {}\nthreshold = {}\nfeasible_points = {}\npassed = {passed}\n",
            fnum(max_gap),
            fnum(threshold),
            outcome.feasible_points
        ),
    };
    Ok((content, passed))
}

fn verify_perturbation(
    args: &VerifyArgs,
    format: OutputFormat,
    seed: u64,
) -> Result<CommandOutput, CliError> {
    let levels = parse_levels(
        args.levels
            .as_deref()
            .ok_or_else(|| CliError::Usage("--check perturbation needs --levels".into()))?,
    )?;
    let kind = args.kind.to_kind();
    let solution = match kind {
        StatisticsKind::Bosonic => bosonic_occupation(&levels, args.beta, args.alpha)?,
        StatisticsKind::Exclusion => exclusion_occupation(&levels, args.beta, args.alpha)?,
    };
    let passed = perturbation_test(&levels, &solution, args.trials, args.magnitude, seed)?;
    let content = match format {
        OutputFormat::Json => {
            let obj = jobj(&[
                ("check", jstr("perturbation")),
                ("kind", jstr(&kind.to_string())),
                ("alpha", jnum(args.alpha)),
                ("beta", jnum(args.beta)),
                ("trials", args.trials.to_string()),
                ("magnitude", jnum(args.magnitude)),
                ("seed", seed.to_string()),
                ("passed", jbool(passed)),
            ]);
            format!("{obj}\n")
        }
        OutputFormat::Csv => format!(
            "trials,magnitude,seed,passed\n{},{},{seed},{passed}\n",
            args.trials,
            fnum(args.magnitude)
        ),
        OutputFormat::Plain => format!(
            "check = perturbation\ntrials = {}\nmagnitude = {}\nseed = {seed}\npassed = {passed}\n",
            args.trials,
            fnum(args.magnitude)
        ),
    };
    Ok((content, passed))
}

pub fn figure1(args: &Figure1Args, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let table = figure1_table(args.min, args.max, args.points)?;
    let content = match format {
        // Plain shares the CSV rendering; the table is the artifact.
        OutputFormat::Csv | OutputFormat::Plain => table.to_csv(),
        OutputFormat::Json => {
            let rows = table.rows().iter().map(|p| {
                jobj(&[
                    ("phi", jnum(p.phi)),
                    ("occupation", jnum(p.occupation)),
                    ("log_phi", jnum(p.log_phi)),
                    ("log_n", jnum(p.log_n)),
                    ("local_slope", jnum(p.local_slope)),
                    ("regime", jstr(&p.regime.to_string())),
                ])
            });
            format!("{}\n", jarr(rows))
        }
    };
    Ok((content, true))
}

pub fn slope(args: &SlopeArgs, format: OutputFormat) -> Result<CommandOutput, CliError> {
    let numeric = numeric_slope(args.phi, args.ratio)?;
    let analytic = analytic_slope(args.phi);
    let difference = (numeric - analytic).abs();
    let content = match format {
        OutputFormat::Plain => format!(
            "numeric_slope = {}\nanalytic_slope = {}\nabs_difference = {}\n",
            fnum(numeric),
            fnum(analytic),
            fnum(difference)
        ),
        OutputFormat::Csv => format!(
            "phi,ratio,numeric_slope,analytic_slope,abs_difference\n{},{},{},{},{}\n",
            fnum(args.phi),
            fnum(args.ratio),
            fnum(numeric),
            fnum(analytic),
            fnum(difference)
        ),
        OutputFormat::Json => {
            let obj = jobj(&[
                ("phi", jnum(args.phi)),
                ("ratio", jnum(args.ratio)),
                ("numeric_slope", jnum(numeric)),
                ("analytic_slope", jnum(analytic)),
                ("abs_difference", jnum(difference)),
            ]);
            format!("{obj}\n")
        }
    };
    Ok((content, true))
}

pub fn benford(
    args: &BenfordArgs,
    format: OutputFormat,
    seed: u64,
) -> Result<CommandOutput, CliError> {
    let mode = match args.mode {
        crate::BenfordModeArg::Analytic => BenfordMode::Analytic,
        crate::BenfordModeArg::Sampled => BenfordMode::Sampled,
    };
    let frequencies = benford_frequencies(args.decades, mode, args.samples, seed)?;
    let analytic = benford_frequencies(args.decades, BenfordMode::Analytic, 0, 0)?;
    let max_deviation = frequencies
        .iter()
        .zip(&analytic)
        .map(|(f, a)| (f - a).abs())
        .fold(0.0_f64, f64::max);
    let content = match format {
        OutputFormat::Csv => {
            let mut out = String::from("digit,frequency,analytic,abs_deviation\n");
            for (d, (&f, &a)) in frequencies.iter().zip(&analytic).enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    d + 1,
                    fnum(f),
                    fnum(a),
                    fnum((f - a).abs())
                );
            }
            out
        }
        OutputFormat::Plain => {
            let mut out = String::new();
            for (d, &f) in frequencies.iter().enumerate() {
                let _ = writeln!(out, "{} {}", d + 1, fnum(f));
            }
            out
        }
        OutputFormat::Json => {
            let mode_name = match mode {
                BenfordMode::Analytic => "analytic",
                BenfordMode::Sampled => "sampled",
            };
            let obj = jobj(&[
                ("mode", jstr(mode_name)),
                ("decades", args.decades.to_string()),
                ("samples", args.samples.to_string()),
                ("seed", seed.to_string()),
                ("frequencies", jarr(frequencies.iter().map(|&f| jnum(f)))),
                ("analytic", jarr(analytic.iter().map(|&f| jnum(f)))),
                ("max_abs_deviation", jnum(max_deviation)),
            ]);
            format!("{obj}\n")
        }
    };
    Ok((content, true))
}
