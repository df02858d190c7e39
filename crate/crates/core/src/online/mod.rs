//! Online schedulers.
//!
//! Every algorithm here sees `t` and `u` up front but learns a job's `p`
//! only when its test finishes. All of them are deterministic given their
//! inputs (and the seed, for the randomized one); ties break by job id.

mod parallel;
mod queue;
mod randomized;
mod single;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parallel::{run_pcp_parallel, run_uniform_parallel};
pub use queue::{initial_queue, queue_from_decisions, threshold_decisions, TaskQueue};
pub use randomized::{
    decide_tests, job_test_probability, run_rand_pcp, run_with_decisions, test_probability,
    RandDecision,
};
pub use single::{queue_execution, run_ae, run_pcp, ExecWeight};

use crate::model::Schedule;

/// `(1 + sqrt 5) / 2`.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;
/// `(1 + sqrt 5 + sqrt(2 (7 + 5 sqrt 5))) / 4`, the test-weight scale that
/// balances the PCP bound at `alpha = GOLDEN_RATIO`.
pub const PCP_BETA: f64 = 2.316_512_429_173_132_3;

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

pub fn pcp_optimal_beta() -> f64 {
    (1.0 + 5f64.sqrt() + (2.0 * (7.0 + 5.0 * 5f64.sqrt())).sqrt()) / 4.0
}

/// Test threshold `alpha` (test iff `u >= alpha * t`) and test-weight scale
/// `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    pub alpha: f64,
    pub beta: f64,
}

impl AlgoParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, RunError> {
        if !(alpha.is_finite() && alpha >= 1.0) {
            return Err(RunError::BadParams(format!(
                "alpha must be >= 1, got {alpha}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(RunError::BadParams(format!("beta must be > 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    /// `alpha = beta = sqrt 2`, the best choice for the AE bound.
    pub fn ae_optimal() -> Self {
        Self {
            alpha: std::f64::consts::SQRT_2,
            beta: std::f64::consts::SQRT_2,
        }
    }

    /// `alpha = golden ratio`, `beta = PCP_BETA`.
    pub fn pcp_optimal() -> Self {
        Self {
            alpha: GOLDEN_RATIO,
            beta: PCP_BETA,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("{algorithm} runs on a single machine, instance has {machines}")]
    MachineCountUnsupported {
        algorithm: &'static str,
        machines: usize,
    },
    #[error("testing times differ (job {0})")]
    NonUniformTesting(u64),
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    TotalCompletion,
    Makespan,
}

pub fn schedule_cost(s: &Schedule, objective: Objective) -> f64 {
    match objective {
        Objective::TotalCompletion => s.total_completion(),
        Objective::Makespan => s.makespan(),
    }
}

fn require_single(algorithm: &'static str, machines: usize) -> Result<(), RunError> {
    if machines == 1 {
        Ok(())
    } else {
        Err(RunError::MachineCountUnsupported {
            algorithm,
            machines,
        })
    }
}
