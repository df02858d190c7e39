//! Invariant checks over single instances and seeded sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::gen::{gen_random_instance, GenConfig};
use crate::model::Instance;
use crate::online::AlgoParams;

use super::{
    check_gong_property, check_pair_bounds, contributions, contributions_parallel,
    empirical_ratio_with_bound, greedy_completion_slack, per_job_slack, Algo, AlgoSpec,
    AnalysisError,
};

/// Outcome of one named invariant. `slack` is the margin left by the
/// tightest case; negative beyond the tolerance means failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub slack: Option<f64>,
}

impl Check {
    fn slack(name: &'static str, slack: f64, tol: f64) -> Self {
        Self {
            name,
            ok: slack >= -tol,
            slack: Some(slack),
        }
    }

    fn flag(name: &'static str, ok: bool) -> Self {
        Self {
            name,
            ok,
            slack: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    /// Smallest slack among the checks that carry one.
    pub fn min_slack(&self) -> Option<f64> {
        self.checks.iter().filter_map(|c| c.slack).reduce(f64::min)
    }
}

fn params_of(spec: &AlgoSpec) -> Option<(Algo, AlgoParams)> {
    let (algo, alpha, beta) = match *spec {
        AlgoSpec::Ae { alpha, beta } => (Algo::Ae, alpha, beta),
        AlgoSpec::Pcp { alpha, beta } => (Algo::Pcp, alpha, beta),
        _ => return None,
    };
    Some((algo, AlgoParams::new(alpha, beta).ok()?))
}

/// Runs `spec` on `inst` and checks every invariant that applies to it.
pub fn verify_instance(
    spec: &AlgoSpec,
    inst: &Instance,
    bound: f64,
) -> Result<Verification, AnalysisError> {
    let tol = inst.tolerance();
    let mut checks = Vec::new();
    if let Some(s) = spec.schedule(inst)? {
        checks.push(Check::flag("schedule-valid", s.check().is_ok()));
        if s.machines == 1 {
            let c = contributions(&s)?;
            let worst = (0..c.n())
                .map(|j| -(c.column_sum(j) - s.completion[j]).abs())
                .fold(f64::INFINITY, f64::min);
            checks.push(Check::slack("column-sums", worst, tol));
        }
        if let Some((algo, params)) = params_of(spec) {
            let rep = check_pair_bounds(&s, algo, &params)?;
            if !rep.pairs.is_empty() {
                checks.push(Check::slack("pair-bounds", rep.min_slack, tol));
            }
            checks.push(Check::slack(
                "per-job-time",
                per_job_slack(&s, params.alpha),
                tol,
            ));
        }
        let c = contributions_parallel(&s);
        checks.push(Check::slack(
            "greedy-completion",
            greedy_completion_slack(&s, &c),
            tol,
        ));
        if let Some(order) = &s.list_order {
            checks.push(Check::flag("list-order", check_gong_property(&s, order)));
        }
    }
    let rep = empirical_ratio_with_bound(spec, inst, bound)?;
    checks.push(Check::slack("ratio-bound", rep.bound - rep.ratio, 1e-9));
    Ok(Verification { checks })
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub algo: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub alg_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub bound: f64,
    pub min_slack: Option<f64>,
    #[serde(skip)]
    pub verification: Verification,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.verification.ok()
    }
}

/// Generates one instance per config, runs `spec` and verifies it. Work is
/// spread over threads; rows come back in config order.
pub fn sweep(spec: &AlgoSpec, configs: &[GenConfig]) -> Vec<Result<SweepRow, AnalysisError>> {
    sweep_with_bound(spec, configs, spec.bound())
}

/// `sweep` checking ratios against `bound` instead of the theorem bound.
pub fn sweep_with_bound(
    spec: &AlgoSpec,
    configs: &[GenConfig],
    bound: f64,
) -> Vec<Result<SweepRow, AnalysisError>> {
    configs
        .par_iter()
        .map(|cfg| {
            let mut inst = gen_random_instance(cfg)?;
            inst.machines = spec.machines();
            let verification = verify_instance(spec, &inst, bound)?;
            let rep = empirical_ratio_with_bound(spec, &inst, bound)?;
            Ok(SweepRow {
                algo: rep.algo,
                alpha: rep.alpha,
                beta: rep.beta,
                m: rep.m,
                n: rep.n,
                seed: cfg.seed,
                alg_cost: rep.alg_cost,
                opt_cost: rep.opt_cost,
                ratio: rep.ratio,
                bound: rep.bound,
                min_slack: verification.min_slack(),
                verification,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_pair_family;
    use crate::online::{GOLDEN_RATIO, PCP_BETA};

    #[test]
    fn pair_family_passes_everything() {
        let inst = gen_pair_family(0.1).unwrap();
        let spec = AlgoSpec::Ae {
            alpha: 1.0,
            beta: 1.0,
        };
        let v = verify_instance(&spec, &inst, spec.bound()).unwrap();
        assert!(v.ok(), "{v:?}");
        let names: Vec<_> = v.checks.iter().map(|c| c.name).collect();
        assert!(names.contains(&"pair-bounds"));
        assert!(names.contains(&"ratio-bound"));
    }

    #[test]
    fn a_tight_bound_is_reported() {
        let inst = gen_pair_family(0.1).unwrap();
        let spec = AlgoSpec::Ae {
            alpha: 1.0,
            beta: 1.0,
        };
        let v = verify_instance(&spec, &inst, 1.5).unwrap();
        assert!(!v.ok());
        assert_eq!(v.failures().next().unwrap().name, "ratio-bound");
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let spec = AlgoSpec::Pcp {
            alpha: GOLDEN_RATIO,
            beta: PCP_BETA,
        };
        let cfgs: Vec<GenConfig> = (0..40).map(|s| GenConfig::new(5, 3.0, s)).collect();
        let a = sweep(&spec, &cfgs);
        let b = sweep(&spec, &cfgs);
        assert_eq!(a, b);
        for (i, row) in a.iter().enumerate() {
            let row = row.as_ref().unwrap();
            assert_eq!(row.seed, i as u64);
            assert!(row.ok());
        }
    }

    #[test]
    fn parallel_sweep_checks_list_order() {
        let spec = AlgoSpec::PcpParallel {
            machines: 3,
            alpha: GOLDEN_RATIO,
            beta: PCP_BETA,
        };
        let cfgs: Vec<GenConfig> = (0..40).map(|s| GenConfig::new(8, 3.0, s)).collect();
        for row in sweep(&spec, &cfgs) {
            let row = row.unwrap();
            assert!(row
                .verification
                .checks
                .iter()
                .any(|c| c.name == "list-order"));
        }
    }
}
