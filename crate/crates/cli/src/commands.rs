use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use schedlab::adversary::{run_adversary_game, AdversaryError, Baseline, GameResult};
use schedlab::analysis::{
    empirical_ratio_with_bound, sweep_with_bound, worst_case_search, AlgoSpec, AnalysisError,
    SweepRow, MAX_RANDOM_JOBS,
};
use schedlab::gen::GenConfig;
use schedlab::json::parse_instance;
use schedlab::model::{Instance, ModelError};
use schedlab::online::{schedule_cost, Objective, GOLDEN_RATIO, PCP_BETA};
use schedlab::preempt::{gen_random_preemptive, PreemptError};

use crate::output::{write_csv, write_json};
use crate::{
    AdversaryArgs, AlgoArgs, AlgoId, ObjectiveArg, RunArgs, SchedulerKind, SearchArgs, SweepArgs,
    TrialArgs, VerifyArgs,
};

const RATIO_TOL: f64 = 1e-9;
const R_MAX_CYCLE: [f64; 3] = [1.5, 3.0, 6.0];
/// Violations listed in full in a verify report.
const MAX_LISTED: usize = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}", path = .path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", .path.display())]
    Instance { path: PathBuf, source: ModelError },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Preempt(#[from] PreemptError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug)]
pub enum Status {
    Ok,
    Violation(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn default_alpha(alg: AlgoId) -> f64 {
    match alg {
        AlgoId::Ae => std::f64::consts::SQRT_2,
        _ => GOLDEN_RATIO,
    }
}

fn default_beta(alg: AlgoId) -> f64 {
    match alg {
        AlgoId::Ae => std::f64::consts::SQRT_2,
        AlgoId::RandPcp => 2.0,
        _ => PCP_BETA,
    }
}

fn is_parallel(alg: AlgoId) -> bool {
    matches!(alg, AlgoId::PcpParallel | AlgoId::UniformParallel)
}

/// Builds the spec, with `m_fallback` used when a parallel algorithm gets no
/// `--m`.
fn build_spec(
    alg: AlgoId,
    alpha: Option<f64>,
    beta: Option<f64>,
    m: Option<usize>,
    m_fallback: usize,
) -> Result<AlgoSpec, CliError> {
    if alg == AlgoId::RandPcp && alpha.is_some() {
        return Err(usage("rand-pcp takes no --alpha"));
    }
    if alg == AlgoId::UniformParallel && beta.is_some() {
        return Err(usage("uniform-parallel takes no --beta"));
    }
    let machines = match (is_parallel(alg), m) {
        (true, Some(0)) => return Err(usage("--m must be at least 1")),
        (true, Some(m)) => m,
        (true, None) => m_fallback,
        (false, None | Some(1)) => 1,
        (false, Some(m)) => {
            return Err(usage(format!(
                "this algorithm runs on one machine, got --m {m}"
            )))
        }
    };
    let alpha = alpha.unwrap_or(default_alpha(alg));
    let beta = beta.unwrap_or(default_beta(alg));
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(usage(format!(
            "--alpha must be a finite number >= 1, got {alpha}"
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(usage(format!(
            "--beta must be a finite positive number, got {beta}"
        )));
    }
    Ok(match alg {
        AlgoId::Ae => AlgoSpec::Ae { alpha, beta },
        AlgoId::Pcp => AlgoSpec::Pcp { alpha, beta },
        AlgoId::RandPcp => AlgoSpec::RandPcp { beta },
        AlgoId::PcpParallel => AlgoSpec::PcpParallel {
            machines,
            alpha,
            beta,
        },
        AlgoId::UniformParallel => AlgoSpec::UniformParallel { machines, alpha },
    })
}

fn spec_from(a: &AlgoArgs, m_fallback: usize) -> Result<AlgoSpec, CliError> {
    build_spec(a.alg, a.alpha, a.beta, a.m, m_fallback)
}

fn check_trials(spec: &AlgoSpec, t: &TrialArgs) -> Result<(), CliError> {
    if t.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if t.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if matches!(spec, AlgoSpec::RandPcp { .. }) && t.n > MAX_RANDOM_JOBS {
        return Err(usage(format!(
            "rand-pcp is evaluated exactly; --n is capped at {MAX_RANDOM_JOBS}"
        )));
    }
    if let Some(r) = t.r_max {
        if !(r.is_finite() && r > 0.0) {
            return Err(usage(format!(
                "--r-max must be a finite positive number, got {r}"
            )));
        }
    }
    Ok(())
}

/// Generator config of trial `i`.
fn trial_config(spec: &AlgoSpec, t: &TrialArgs, i: u64) -> GenConfig {
    let r_max = t.r_max.unwrap_or(R_MAX_CYCLE[(i % 3) as usize]);
    let cfg = GenConfig::new(1 + (i % t.n as u64) as usize, r_max, t.seed.wrapping_add(i));
    match spec {
        AlgoSpec::UniformParallel { .. } => cfg.unit_testing(),
        _ => cfg,
    }
}

fn trial_configs(spec: &AlgoSpec, t: &TrialArgs) -> Vec<GenConfig> {
    (0..t.trials).map(|i| trial_config(spec, t, i)).collect()
}

#[derive(Serialize)]
struct RunReport {
    #[serde(flatten)]
    report: schedlab::analysis::RatioReport,
    objective: Objective,
    /// Cost under `objective`; absent for rand-pcp under the makespan.
    objective_value: Option<f64>,
}

pub fn run(a: &RunArgs) -> Result<Status, CliError> {
    let text = std::fs::read_to_string(&a.input).map_err(|source| CliError::Read {
        path: a.input.clone(),
        source,
    })?;
    let mut inst = parse_instance(&text).map_err(|source| CliError::Instance {
        path: a.input.clone(),
        source,
    })?;
    let spec = spec_from(&a.algo, inst.machines)?;
    inst.machines = spec.machines();
    if matches!(spec, AlgoSpec::RandPcp { .. }) && inst.len() > MAX_RANDOM_JOBS {
        return Err(usage(format!(
            "rand-pcp is evaluated exactly; at most {MAX_RANDOM_JOBS} jobs"
        )));
    }
    let bound = checked_bound(a.bound, &spec)?;
    let report = empirical_ratio_with_bound(&spec, &inst, bound).map_err(precondition)?;
    let objective = match a.objective {
        ObjectiveArg::TotalCompletion => Objective::TotalCompletion,
        ObjectiveArg::Makespan => Objective::Makespan,
    };
    let objective_value = match (objective, spec.schedule(&inst)?) {
        (Objective::TotalCompletion, _) => Some(report.alg_cost),
        (_, Some(s)) => Some(schedule_cost(&s, objective)),
        (_, None) => None,
    };
    let within = report.within_bound(RATIO_TOL);
    let msg = format!("ratio {} exceeds bound {}", report.ratio, report.bound);
    write_json(
        a.output.as_deref(),
        &RunReport {
            report,
            objective,
            objective_value,
        },
    )?;
    Ok(if within {
        Status::Ok
    } else {
        Status::Violation(msg)
    })
}

/// Algorithm preconditions on a user instance are usage errors.
fn precondition(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::Run(run) => usage(run.to_string()),
        AnalysisError::TooManyRandomJobs(_) => usage(e.to_string()),
        other => other.into(),
    }
}

fn checked_bound(bound: Option<f64>, spec: &AlgoSpec) -> Result<f64, CliError> {
    match bound {
        Some(b) if !(b.is_finite() && b > 0.0) => Err(usage(format!(
            "--bound must be a finite positive number, got {b}"
        ))),
        Some(b) => Ok(b),
        None => Ok(spec.bound()),
    }
}

/// Runs every trial, failing fast on errors.
fn rows(spec: &AlgoSpec, t: &TrialArgs, bound: f64) -> Result<Vec<SweepRow>, CliError> {
    Ok(sweep_with_bound(spec, &trial_configs(spec, t), bound)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?)
}

fn worst_row(rows: Vec<SweepRow>) -> Option<SweepRow> {
    let min_slack = rows.iter().filter_map(|r| r.min_slack).reduce(f64::min);
    let mut worst = rows
        .into_iter()
        .reduce(|best, r| if r.ratio > best.ratio { r } else { best })?;
    worst.min_slack = min_slack;
    Some(worst)
}

pub fn sweep(a: &SweepArgs) -> Result<Status, CliError> {
    let alphas: Vec<Option<f64>> = if a.alphas.is_empty() {
        vec![None]
    } else {
        a.alphas.iter().copied().map(Some).collect()
    };
    let betas: Vec<Option<f64>> = if a.betas.is_empty() {
        vec![None]
    } else {
        a.betas.iter().copied().map(Some).collect()
    };
    let mut specs = Vec::new();
    for &alpha in &alphas {
        for &beta in &betas {
            specs.push(build_spec(a.alg, alpha, beta, a.m, 2)?);
        }
    }
    for spec in &specs {
        check_trials(spec, &a.trials)?;
    }

    let mut out = Vec::new();
    let mut failed = 0usize;
    for spec in &specs {
        let rows = rows(spec, &a.trials, spec.bound())?;
        failed += rows.iter().filter(|r| !r.ok()).count();
        if a.per_trial {
            out.extend(rows);
        } else {
            out.extend(worst_row(rows));
        }
    }
    write_csv(a.output.as_deref(), &out)?;
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::Violation(format!("{failed} trials failed verification"))
    })
}

#[derive(Debug, Serialize)]
struct Violation {
    trial: u64,
    seed: u64,
    check: String,
    slack: Option<f64>,
    instance: Instance,
}

#[derive(Debug, Serialize)]
struct AdversaryCheck {
    scheduler: String,
    m: usize,
    ratio: f64,
    floor: f64,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    algo: String,
    alpha: Option<f64>,
    beta: Option<f64>,
    m: usize,
    trials: u64,
    max_ratio: f64,
    worst_seed: u64,
    bound: f64,
    min_slack: Option<f64>,
    merge_steps: usize,
    adversary: Vec<AdversaryCheck>,
    violation_count: usize,
    violations: Vec<Violation>,
}

fn adversary_floor(m: usize) -> f64 {
    2.0 - 1.0 / (2.0 * m as f64)
}

/// Failed check: trial, check name, slack.
type Failure = (u64, &'static str, Option<f64>);

/// Merges each trial's random preemptive schedule step by step. Returns the
/// number of steps and the failures.
fn check_merges(spec: &AlgoSpec, t: &TrialArgs) -> Result<(usize, Vec<Failure>), CliError> {
    let per_trial: Vec<Result<(usize, Option<Failure>), PreemptError>> = (0..t.trials)
        .into_par_iter()
        .map(|i| {
            let s = gen_random_preemptive(&trial_config(spec, t, i), 3)?;
            let steps = s.merge_steps();
            let mut prev = s.total_completion();
            for step in &steps {
                let cost = step.total_completion();
                if cost > prev + 1e-12 {
                    return Ok((steps.len(), Some((i, "merge-monotone", Some(prev - cost)))));
                }
                prev = cost;
            }
            let contiguous = steps.last().unwrap_or(&s).is_non_preemptive();
            Ok((
                steps.len(),
                (!contiguous).then_some((i, "merge-contiguous", None)),
            ))
        })
        .collect();
    let mut total = 0;
    let mut failures = Vec::new();
    for r in per_trial {
        let (n, f) = r?;
        total += n;
        failures.extend(f);
    }
    Ok((total, failures))
}

pub fn verify(a: &VerifyArgs) -> Result<Status, CliError> {
    let spec = spec_from(&a.algo, 2)?;
    check_trials(&spec, &a.trials)?;
    let bound = checked_bound(a.bound, &spec)?;
    let configs = trial_configs(&spec, &a.trials);
    let rows = rows(&spec, &a.trials, bound)?;

    let mut violations = Vec::new();
    let mut record = |trial: u64, check: &str, slack: Option<f64>| -> Result<(), CliError> {
        let cfg = &configs[trial as usize];
        let mut instance = schedlab::gen::gen_random_instance(cfg).map_err(AnalysisError::from)?;
        instance.machines = spec.machines();
        violations.push(Violation {
            trial,
            seed: cfg.seed,
            check: check.to_string(),
            slack,
            instance,
        });
        Ok(())
    };
    for (i, row) in rows.iter().enumerate() {
        for c in row.verification.failures() {
            record(i as u64, c.name, c.slack)?;
        }
    }
    let (merge_steps, merge_failures) = check_merges(&spec, &a.trials)?;
    for (i, check, slack) in merge_failures {
        record(i, check, slack)?;
    }

    let game_m = spec.machines().max(2);
    let mut adversary = Vec::new();
    for b in [Baseline::TestAllGreedy, Baseline::NeverTestGreedy] {
        let mut sched = b.scheduler();
        let res = run_adversary_game(&mut sched, game_m)?;
        adversary.push(AdversaryCheck {
            scheduler: res.scheduler,
            m: game_m,
            ratio: res.ratio,
            floor: adversary_floor(game_m),
        });
    }
    let floor_ok = adversary.iter().all(|c| c.ratio >= c.floor - RATIO_TOL);

    let worst = rows
        .iter()
        .enumerate()
        .reduce(|best, r| if r.1.ratio > best.1.ratio { r } else { best })
        .expect("at least one trial");
    let violation_count = violations.len();
    let report = VerifyReport {
        algo: spec.id().to_string(),
        alpha: spec.alpha(),
        beta: spec.beta(),
        m: spec.machines(),
        trials: a.trials.trials,
        max_ratio: worst.1.ratio,
        worst_seed: configs[worst.0].seed,
        bound,
        min_slack: rows.iter().filter_map(|r| r.min_slack).reduce(f64::min),
        merge_steps,
        adversary,
        violation_count,
        violations: violations.into_iter().take(MAX_LISTED).collect(),
    };
    write_json(a.output.as_deref(), &report)?;
    Ok(match (violation_count, floor_ok) {
        (0, true) => Status::Ok,
        (0, false) => Status::Violation("adversary ratio below the floor".into()),
        (n, _) => Status::Violation(format!("{n} failed checks")),
    })
}

pub fn adversary(a: &AdversaryArgs) -> Result<Status, CliError> {
    if a.m < 2 {
        return Err(usage("the adversary game needs --m >= 2"));
    }
    let baseline = match a.scheduler {
        SchedulerKind::TestAll => Baseline::TestAllGreedy,
        SchedulerKind::NeverTest => Baseline::NeverTestGreedy,
    };
    let res: GameResult = run_adversary_game(&mut baseline.scheduler(), a.m)?;
    let floor = adversary_floor(a.m);
    let status = if res.ratio >= floor - RATIO_TOL {
        Status::Ok
    } else {
        Status::Violation(format!("ratio {} below {floor}", res.ratio))
    };
    write_json(a.output.as_deref(), &res)?;
    Ok(status)
}

pub fn search(a: &SearchArgs) -> Result<Status, CliError> {
    let spec = spec_from(&a.algo, 2)?;
    if a.n == 0 || a.budget == 0 {
        return Err(usage("--n and --budget must be at least 1"));
    }
    if matches!(spec, AlgoSpec::RandPcp { .. }) && a.n > MAX_RANDOM_JOBS {
        return Err(usage(format!(
            "rand-pcp is evaluated exactly; --n is capped at {MAX_RANDOM_JOBS}"
        )));
    }
    let res = worst_case_search(&spec, a.n, a.budget, a.seed);
    let status = if res.report.within_bound(RATIO_TOL) {
        Status::Ok
    } else {
        Status::Violation(format!(
            "ratio {} exceeds bound {}",
            res.report.ratio, res.report.bound
        ))
    };
    write_json(a.output.as_deref(), &res)?;
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_tuned_parameters() {
        let ae = build_spec(AlgoId::Ae, None, None, None, 2).unwrap();
        assert_eq!(ae.alpha(), Some(std::f64::consts::SQRT_2));
        let rand = build_spec(AlgoId::RandPcp, None, None, None, 2).unwrap();
        assert_eq!(rand, AlgoSpec::RandPcp { beta: 2.0 });
        let par = build_spec(AlgoId::PcpParallel, None, None, None, 5).unwrap();
        assert_eq!(par.machines(), 5);
    }

    #[test]
    fn machine_counts_are_checked() {
        assert!(build_spec(AlgoId::Pcp, None, None, Some(1), 1).is_ok());
        assert!(matches!(
            build_spec(AlgoId::Pcp, None, None, Some(2), 1),
            Err(CliError::Usage(_))
        ));
        assert!(build_spec(AlgoId::UniformParallel, None, None, Some(0), 1).is_err());
    }

    #[test]
    fn trial_sizes_cycle() {
        let t = TrialArgs {
            n: 3,
            trials: 6,
            seed: 10,
            r_max: None,
        };
        let spec = AlgoSpec::Ae {
            alpha: 1.0,
            beta: 1.0,
        };
        let cfgs = trial_configs(&spec, &t);
        let sizes: Vec<usize> = cfgs.iter().map(|c| c.n).collect();
        assert_eq!(sizes, vec![1, 2, 3, 1, 2, 3]);
        assert_eq!(cfgs[4].seed, 14);
        assert_eq!(cfgs[4].r_max, 3.0);
    }

    #[test]
    fn worst_row_keeps_the_first_maximum_and_the_global_slack() {
        let spec = AlgoSpec::Pcp {
            alpha: GOLDEN_RATIO,
            beta: PCP_BETA,
        };
        let t = TrialArgs {
            n: 4,
            trials: 50,
            seed: 0,
            r_max: None,
        };
        let all = rows(&spec, &t, spec.bound()).unwrap();
        let max = all.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let first = all.iter().position(|r| r.ratio == max).unwrap() as u64;
        let slack = all.iter().filter_map(|r| r.min_slack).reduce(f64::min);
        let w = worst_row(all).unwrap();
        assert_eq!(w.seed, first);
        assert_eq!(w.min_slack, slack);
    }
}
