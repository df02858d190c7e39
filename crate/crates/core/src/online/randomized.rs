//! Rand-PCP: each job is tested with a probability depending on `r = u/t`,
//! then the PCP queue runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::model::{Instance, Job, JobId, Schedule};

use super::{queue_execution, queue_from_decisions, require_single, ExecWeight, RunError};

/// Probability of testing a job with ratio `r = u/t`.
///
/// Zero below 1, one above 3, and in between the value that balances the
/// worst case for an untested-optimal job against a tested-optimal one.
/// For `beta = 2` this is `(3r^2 - 3r) / (3r^2 - 4r + 3)`. An infinite or
/// undefined ratio (free test) yields 1.
pub fn test_probability(r: f64, beta: f64) -> f64 {
    if r.is_nan() || r > 3.0 {
        return 1.0;
    }
    if r < 1.0 {
        return 0.0;
    }
    let numer = (beta + 1.0) * (r - 1.0);
    if numer == 0.0 {
        return 0.0;
    }
    let untested_opt = (2.0 / r + 1.0)
        .max(beta / r)
        .max((1.0 + 1.0 / beta) * (1.0 + 1.0 / r));
    let tested_opt = 2f64.max(beta).max(1.0 + 1.0 / beta);
    let denom = beta * (untested_opt - tested_opt + r - 1.0) + r - 1.0;
    if denom == 0.0 {
        return 1.0;
    }
    // outside [0, 1] the balancing point is unreachable; clamp
    (numer / denom).clamp(0.0, 1.0)
}

pub fn job_test_probability(job: &Job, beta: f64) -> f64 {
    test_probability(job.ratio(), beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandDecision {
    pub job: JobId,
    pub ratio: f64,
    pub prob: f64,
    pub tested: bool,
}

/// Uniform draw in [0, 1) for one job: ChaCha8 keyed by the seed, with the
/// job id as stream number, so it does not depend on iteration order.
fn job_draw(seed: u64, job: JobId) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(job);
    rng.random::<f64>()
}

pub fn decide_tests(inst: &Instance, beta: f64, seed: u64) -> Vec<RandDecision> {
    inst.jobs
        .iter()
        .map(|job| {
            let prob = job_test_probability(job, beta);
            RandDecision {
                job: job.id,
                ratio: job.ratio(),
                prob,
                tested: job_draw(seed, job.id) < prob,
            }
        })
        .collect()
}

/// Runs the PCP queue with the given per-job test decisions.
pub fn run_with_decisions(inst: &Instance, beta: f64, tested: &[bool]) -> Schedule {
    assert_eq!(tested.len(), inst.len(), "one decision per job");
    queue_execution(
        inst,
        queue_from_decisions(inst, beta, tested),
        ExecWeight::Certain,
    )
}

pub fn run_rand_pcp(inst: &Instance, beta: f64, seed: u64) -> Result<Schedule, RunError> {
    require_single("Rand-PCP", inst.machines)?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(RunError::BadParams(format!("beta must be > 0, got {beta}")));
    }
    let tested: Vec<bool> = decide_tests(inst, beta, seed)
        .iter()
        .map(|d| d.tested)
        .collect();
    Ok(run_with_decisions(inst, beta, &tested))
}
