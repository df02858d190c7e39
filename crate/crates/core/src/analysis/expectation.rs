//! Expected cost of Rand-PCP, exactly by enumeration and by sampling.

use rayon::prelude::*;
use serde::Serialize;

use crate::model::Instance;
use crate::online::{job_test_probability, run_rand_pcp, run_with_decisions};

use super::AnalysisError;

/// Largest number of jobs with a fractional test probability accepted by
/// [`rand_expected_cost_exact`].
pub const MAX_RANDOM_JOBS: usize = 20;

fn require_single(inst: &Instance) -> Result<(), AnalysisError> {
    if inst.machines != 1 {
        return Err(AnalysisError::ParallelScheduleNeedsSegmentVariant(
            inst.machines,
        ));
    }
    Ok(())
}

/// Exact expected total completion time of Rand-PCP: the probability-weighted
/// sum over every test/no-test outcome of the jobs whose probability lies
/// strictly between 0 and 1.
pub fn rand_expected_cost_exact(inst: &Instance, beta: f64) -> Result<f64, AnalysisError> {
    require_single(inst)?;
    let probs: Vec<f64> = inst
        .jobs
        .iter()
        .map(|j| job_test_probability(j, beta))
        .collect();
    let free: Vec<usize> = (0..probs.len())
        .filter(|&i| probs[i] > 0.0 && probs[i] < 1.0)
        .collect();
    if free.len() > MAX_RANDOM_JOBS {
        return Err(AnalysisError::TooManyRandomJobs(free.len()));
    }
    let base: Vec<bool> = probs.iter().map(|&p| p >= 1.0).collect();
    let terms: Vec<f64> = (0u64..1 << free.len())
        .into_par_iter()
        .map(|mask| {
            let mut tested = base.clone();
            let mut weight = 1.0;
            for (bit, &i) in free.iter().enumerate() {
                let hit = mask >> bit & 1 == 1;
                tested[i] = hit;
                weight *= if hit { probs[i] } else { 1.0 - probs[i] };
            }
            weight * run_with_decisions(inst, beta, &tested).total_completion()
        })
        .collect();
    // summed in mask order so the result does not depend on thread count
    Ok(terms.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub runs: usize,
}

/// Seed of the `run`-th sample drawn from `seed`.
pub fn mc_run_seed(seed: u64, run: u64) -> u64 {
    seed.wrapping_add(run.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Monte-Carlo estimate of the expected total completion time over `runs`
/// independently seeded executions of Rand-PCP.
pub fn rand_expected_cost_mc(
    inst: &Instance,
    beta: f64,
    runs: usize,
    seed: u64,
) -> Result<McEstimate, AnalysisError> {
    require_single(inst)?;
    assert!(runs >= 2, "need at least two runs");
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for run in 0..runs as u64 {
        let cost = run_rand_pcp(inst, beta, mc_run_seed(seed, run))?.total_completion();
        sum += cost;
        sum_sq += cost * cost;
    }
    let n = runs as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(McEstimate {
        mean,
        std_err: (var / n).sqrt(),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;
    use crate::online::{run_pcp, AlgoParams};

    #[test]
    fn no_random_jobs_is_deterministic_pcp() {
        let inst =
            Instance::new(vec![Job::new(0, 2.0, 1.0, 0.5), Job::new(1, 3.0, 2.5, 1.0)]).unwrap();
        let exact = rand_expected_cost_exact(&inst, 2.0).unwrap();
        // every ratio is below 1, so nothing is tested; any alpha above the
        // ratios reproduces that with PCP
        let pcp = run_pcp(&inst, &AlgoParams::new(10.0, 2.0).unwrap()).unwrap();
        assert_eq!(exact, pcp.total_completion());
    }

    #[test]
    fn one_job_two_outcomes() {
        let (t, u, p) = (1.0, 2.0, 0.5);
        let inst = Instance::new(vec![Job::new(0, t, u, p)]).unwrap();
        let exact = rand_expected_cost_exact(&inst, 2.0).unwrap();
        assert!((exact - (6.0 / 7.0 * (t + p) + 1.0 / 7.0 * u)).abs() < 1e-12);
    }

    #[test]
    fn too_many_random_jobs() {
        let inst = Instance::new((0..21).map(|i| Job::new(i, 1.0, 2.0, 1.0)).collect()).unwrap();
        assert_eq!(
            rand_expected_cost_exact(&inst, 2.0).unwrap_err(),
            AnalysisError::TooManyRandomJobs(21)
        );
    }

    #[test]
    fn monte_carlo_agrees() {
        let inst = Instance::new(vec![
            Job::new(0, 1.0, 2.0, 0.5),
            Job::new(1, 1.0, 1.5, 1.5),
            Job::new(2, 0.5, 1.2, 0.1),
        ])
        .unwrap();
        let exact = rand_expected_cost_exact(&inst, 2.0).unwrap();
        let mc = rand_expected_cost_mc(&inst, 2.0, 20_000, 3).unwrap();
        assert!(
            (mc.mean - exact).abs() < 4.0 * mc.std_err,
            "{mc:?} vs {exact}"
        );
    }
}
