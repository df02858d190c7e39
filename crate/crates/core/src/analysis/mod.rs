//! Competitive analysis: contributions, pair bounds, closed-form ratio
//! expressions, randomized expectations and worst-case search.

use thiserror::Error;

use crate::model::{JobId, ModelError};
use crate::online::RunError;

mod bounds;
mod contrib;
mod expectation;
mod pairs;
mod ratio;
mod search;
mod segments;
mod verify;

pub use bounds::{
    expr_ae_bound, expr_parallel_bound, expr_pcp_bound, rand_case_ratios, rand_worst_ratio,
};
pub use contrib::{
    contributions, contributions_parallel, greedy_completion_slack, last_segment_start,
    ContributionMatrix,
};
pub use expectation::{
    mc_run_seed, rand_expected_cost_exact, rand_expected_cost_mc, McEstimate, MAX_RANDOM_JOBS,
};
pub use pairs::{check_pair_bounds, per_job_slack, Algo, PairBound, PairBoundReport, PairLemma};
pub use ratio::{
    empirical_ratio, empirical_ratio_with_bound, instance_fingerprint, AlgoSpec, RatioReport,
};
pub use search::{worst_case_search, SearchResult};
pub use segments::{check_gong_property, segment_starts};
pub use verify::{sweep, sweep_with_bound, verify_instance, Check, SweepRow, Verification};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("schedule uses {0} machines; use the last-segment contributions")]
    ParallelScheduleNeedsSegmentVariant(usize),
    #[error("test decision of job {0} contradicts the threshold rule")]
    AlgorithmMismatch(JobId),
    #[error("{0} jobs have a fractional test probability (at most {max})", max = MAX_RANDOM_JOBS)]
    TooManyRandomJobs(usize),
    #[error("optimal cost is zero but the algorithm spends {alg_cost}")]
    DegenerateOptZero { alg_cost: f64 },
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
