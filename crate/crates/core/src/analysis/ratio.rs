//! Empirical competitive ratios against the clairvoyant optimum.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::json::serialize_instance;
use crate::model::{Instance, Schedule};
use crate::online::{run_ae, run_pcp, run_pcp_parallel, run_uniform_parallel, AlgoParams};
use crate::opt::{opt_cost_parallel, opt_cost_single, opt_time};

use super::{
    expr_ae_bound, expr_parallel_bound, expr_pcp_bound, rand_expected_cost_exact, rand_worst_ratio,
    AnalysisError,
};

/// An algorithm together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum AlgoSpec {
    Ae {
        alpha: f64,
        beta: f64,
    },
    Pcp {
        alpha: f64,
        beta: f64,
    },
    /// Scored by its exact expected cost.
    RandPcp {
        beta: f64,
    },
    PcpParallel {
        machines: usize,
        alpha: f64,
        beta: f64,
    },
    UniformParallel {
        machines: usize,
        alpha: f64,
    },
}

impl AlgoSpec {
    pub fn ae(params: AlgoParams) -> Self {
        AlgoSpec::Ae {
            alpha: params.alpha,
            beta: params.beta,
        }
    }

    pub fn pcp(params: AlgoParams) -> Self {
        AlgoSpec::Pcp {
            alpha: params.alpha,
            beta: params.beta,
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            AlgoSpec::Ae { .. } => "ae",
            AlgoSpec::Pcp { .. } => "pcp",
            AlgoSpec::RandPcp { .. } => "rand-pcp",
            AlgoSpec::PcpParallel { .. } => "pcp-parallel",
            AlgoSpec::UniformParallel { .. } => "uniform-parallel",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            AlgoSpec::Ae { alpha, .. }
            | AlgoSpec::Pcp { alpha, .. }
            | AlgoSpec::PcpParallel { alpha, .. }
            | AlgoSpec::UniformParallel { alpha, .. } => Some(alpha),
            AlgoSpec::RandPcp { .. } => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            AlgoSpec::Ae { beta, .. }
            | AlgoSpec::Pcp { beta, .. }
            | AlgoSpec::RandPcp { beta }
            | AlgoSpec::PcpParallel { beta, .. } => Some(beta),
            AlgoSpec::UniformParallel { .. } => None,
        }
    }

    pub fn machines(&self) -> usize {
        match *self {
            AlgoSpec::PcpParallel { machines, .. } | AlgoSpec::UniformParallel { machines, .. } => {
                machines
            }
            _ => 1,
        }
    }

    fn params(&self) -> Result<AlgoParams, AnalysisError> {
        // the uniform algorithm has no beta; 1 passes validation
        Ok(AlgoParams::new(
            self.alpha().unwrap_or(1.0),
            self.beta().unwrap_or(1.0),
        )?)
    }

    /// The theorem bound matching this algorithm.
    pub fn bound(&self) -> f64 {
        match *self {
            AlgoSpec::Ae { alpha, beta } => expr_ae_bound(alpha, beta),
            AlgoSpec::Pcp { alpha, beta } => expr_pcp_bound(alpha, beta),
            AlgoSpec::RandPcp { beta } => rand_worst_ratio(beta).0,
            AlgoSpec::PcpParallel {
                machines,
                alpha,
                beta,
            } => expr_parallel_bound(machines, alpha, beta, false),
            AlgoSpec::UniformParallel { machines, alpha } => {
                expr_parallel_bound(machines, alpha, 1.0, true)
            }
        }
    }

    /// Runs a deterministic algorithm. Rand-PCP has no single schedule and
    /// yields `None`.
    pub fn schedule(&self, inst: &Instance) -> Result<Option<Schedule>, AnalysisError> {
        let params = self.params()?;
        let s = match *self {
            AlgoSpec::Ae { .. } => run_ae(inst, &params)?,
            AlgoSpec::Pcp { .. } => run_pcp(inst, &params)?,
            AlgoSpec::RandPcp { .. } => return Ok(None),
            AlgoSpec::PcpParallel { machines, .. } => run_pcp_parallel(inst, machines, &params)?,
            AlgoSpec::UniformParallel { machines, alpha } => {
                run_uniform_parallel(inst, machines, alpha)?
            }
        };
        Ok(Some(s))
    }

    /// Total completion time of the algorithm (expected, for Rand-PCP).
    pub fn cost(&self, inst: &Instance) -> Result<f64, AnalysisError> {
        match *self {
            AlgoSpec::RandPcp { beta } => {
                self.params()?;
                rand_expected_cost_exact(inst, beta)
            }
            _ => Ok(self
                .schedule(inst)?
                .expect("deterministic algorithm")
                .total_completion()),
        }
    }

    pub fn opt_cost(&self, inst: &Instance) -> f64 {
        match self.machines() {
            1 => opt_cost_single(inst),
            m => opt_cost_parallel(inst, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub algo: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub m: usize,
    pub n: usize,
    pub alg_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub bound: f64,
    pub fingerprint: String,
}

impl RatioReport {
    /// Whether the ratio respects the bound up to the instance tolerance.
    pub fn within_bound(&self, tol: f64) -> bool {
        self.ratio <= self.bound + tol
    }
}

/// First 16 hex digits of the SHA-256 of the canonical instance JSON.
pub fn instance_fingerprint(inst: &Instance) -> String {
    let digest = Sha256::digest(serialize_instance(inst).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn empirical_ratio(spec: &AlgoSpec, inst: &Instance) -> Result<RatioReport, AnalysisError> {
    empirical_ratio_with_bound(spec, inst, spec.bound())
}

/// As [`empirical_ratio`], with the bound supplied by the caller. Useful when
/// the bound is expensive and many instances share it.
pub fn empirical_ratio_with_bound(
    spec: &AlgoSpec,
    inst: &Instance,
    bound: f64,
) -> Result<RatioReport, AnalysisError> {
    let alg_cost = spec.cost(inst)?;
    let opt_cost = spec.opt_cost(inst);
    let ratio = if inst.jobs.iter().all(|j| opt_time(j) == 0.0) {
        if alg_cost != 0.0 {
            return Err(AnalysisError::DegenerateOptZero { alg_cost });
        }
        1.0
    } else {
        alg_cost / opt_cost
    };
    Ok(RatioReport {
        algo: spec.id().to_string(),
        alpha: spec.alpha(),
        beta: spec.beta(),
        m: spec.machines(),
        n: inst.len(),
        alg_cost,
        opt_cost,
        ratio,
        bound,
        fingerprint: instance_fingerprint(inst),
    })
}
