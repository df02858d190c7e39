//! Amortized pair bounds: for jobs `k` before `j` in the optimal order,
//! `c[k][j] + c[j][k]` is bounded by a multiple of `k`'s parameters alone.

use serde::Serialize;

use crate::model::{JobId, Schedule};
use crate::online::{threshold_decisions, AlgoParams};
use crate::opt::opt_order;

use super::{contributions, AnalysisError};

/// Deterministic single-machine algorithm whose pair bounds are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Ae,
    Pcp,
}

/// Which bound was applied to a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairLemma {
    /// `k` untested: `(1 + 1/beta) u_k`.
    Untested,
    /// AE, `k` tested: `max{2t+p, (1+beta)t, t+(1+1/beta)p}`.
    AeTested,
    /// PCP, `k` tested: `max{2t+p, beta t, (1+1/beta)(t+p)}`.
    PcpTested,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairBound {
    pub k: JobId,
    pub j: JobId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub lemma: PairLemma,
    /// `p*_k == p*_j`, so the pair is also checked the other way round.
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairBoundReport {
    pub pairs: Vec<PairBound>,
    pub min_slack: f64,
    pub tolerance: f64,
}

impl PairBoundReport {
    pub fn holds(&self) -> bool {
        self.min_slack >= -self.tolerance
    }

    pub fn violations(&self) -> impl Iterator<Item = &PairBound> {
        self.pairs.iter().filter(|p| p.slack < -self.tolerance)
    }
}

/// Checks every pair bound on a single-machine schedule produced by `algo`
/// with `params`. Pairs tied in `p*` are checked in both orientations.
pub fn check_pair_bounds(
    s: &Schedule,
    algo: Algo,
    params: &AlgoParams,
) -> Result<PairBoundReport, AnalysisError> {
    let c = contributions(s)?;
    let inst = &s.instance;
    let expected = threshold_decisions(inst, params.alpha);
    if let Some(idx) = (0..inst.len()).find(|&i| expected[i] != s.tested[i]) {
        return Err(AnalysisError::AlgorithmMismatch(inst.jobs[idx].id));
    }
    let beta = params.beta;
    let order = opt_order(inst);
    let positions: Vec<usize> = order
        .order
        .iter()
        .map(|&id| inst.index_of(id).expect("known job"))
        .collect();

    let bound = |k: usize| -> (f64, PairLemma) {
        let job = &inst.jobs[k];
        let (t, u, p) = (job.test_time, job.upper_limit, job.proc_time);
        if !s.tested[k] {
            return ((1.0 + 1.0 / beta) * u, PairLemma::Untested);
        }
        match algo {
            Algo::Ae => (
                (2.0 * t + p)
                    .max((1.0 + beta) * t)
                    .max(t + (1.0 + 1.0 / beta) * p),
                PairLemma::AeTested,
            ),
            Algo::Pcp => (
                (2.0 * t + p)
                    .max(beta * t)
                    .max((1.0 + 1.0 / beta) * (t + p)),
                PairLemma::PcpTested,
            ),
        }
    };

    let mut pairs = Vec::new();
    for a in 0..positions.len() {
        for b in a + 1..positions.len() {
            let (k, j) = (positions[a], positions[b]);
            let tied = order.pstar[a] == order.pstar[b];
            let orientations: &[(usize, usize)] = if tied { &[(k, j), (j, k)] } else { &[(k, j)] };
            for &(k, j) in orientations {
                let lhs = c.get(k, j) + c.get(j, k);
                let (rhs, lemma) = bound(k);
                pairs.push(PairBound {
                    k: inst.jobs[k].id,
                    j: inst.jobs[j].id,
                    lhs,
                    rhs,
                    slack: rhs - lhs,
                    lemma,
                    tied,
                });
            }
        }
    }
    let min_slack = pairs.iter().map(|p| p.slack).fold(f64::INFINITY, f64::min);
    Ok(PairBoundReport {
        pairs,
        min_slack,
        tolerance: inst.tolerance(),
    })
}

/// Smallest `max{alpha, 1 + 1/alpha} p*_j - time(j)` over all jobs: the time
/// a threshold algorithm spends on a single job is within that factor of the
/// optimum.
pub fn per_job_slack(s: &Schedule, alpha: f64) -> f64 {
    let factor = alpha.max(1.0 + 1.0 / alpha);
    s.instance
        .jobs
        .iter()
        .enumerate()
        .map(|(i, job)| factor * crate::opt::opt_time(job) - s.alg_time(i))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_pair_family, gen_random_instance, GenConfig};
    use crate::model::{Instance, Job};
    use crate::online::{run_ae, run_pcp};

    #[test]
    fn ae_pair_family_slack() {
        let inst = gen_pair_family(0.1).unwrap();
        let params = AlgoParams::new(1.0, 1.0).unwrap();
        let rep = check_pair_bounds(&run_ae(&inst, &params).unwrap(), Algo::Ae, &params).unwrap();
        assert_eq!(rep.pairs.len(), 1);
        let pb = rep.pairs[0];
        assert_eq!((pb.k, pb.j, pb.lemma), (0, 1, PairLemma::AeTested));
        assert!((pb.lhs - 3.3).abs() < 1e-12);
        assert!((pb.rhs - 3.7).abs() < 1e-12);
        assert!((pb.slack - 0.4).abs() < 1e-12);
        assert!(rep.holds());
    }

    #[test]
    fn untested_k_before_j() {
        let inst =
            Instance::new(vec![Job::new(0, 5.0, 1.0, 0.5), Job::new(1, 5.0, 3.0, 2.0)]).unwrap();
        let params = AlgoParams::new(1.0, 1.0).unwrap();
        let rep = check_pair_bounds(&run_pcp(&inst, &params).unwrap(), Algo::Pcp, &params).unwrap();
        let pb = rep.pairs[0];
        assert_eq!(pb.lemma, PairLemma::Untested);
        assert_eq!(pb.lhs, 1.0);
        assert_eq!(pb.rhs, 2.0);
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let inst = gen_pair_family(0.1).unwrap();
        let s = run_ae(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).unwrap();
        let err = check_pair_bounds(&s, Algo::Ae, &AlgoParams::new(2.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, AnalysisError::AlgorithmMismatch(_)));
    }

    #[test]
    fn ties_are_checked_both_ways() {
        let inst =
            Instance::new(vec![Job::new(0, 1.0, 2.0, 1.0), Job::new(1, 0.5, 2.0, 1.5)]).unwrap();
        let params = AlgoParams::new(1.0, 1.0).unwrap();
        let rep = check_pair_bounds(&run_pcp(&inst, &params).unwrap(), Algo::Pcp, &params).unwrap();
        assert_eq!(rep.pairs.len(), 2);
        assert!(rep.pairs.iter().all(|p| p.tied));
        assert!(rep.holds());
    }

    #[test]
    fn random_sweep_holds() {
        for seed in 0..300 {
            let inst =
                gen_random_instance(&GenConfig::new(1 + seed as usize % 8, 3.0, seed)).unwrap();
            let ae = AlgoParams::ae_optimal();
            let pcp = AlgoParams::pcp_optimal();
            let a = check_pair_bounds(&run_ae(&inst, &ae).unwrap(), Algo::Ae, &ae).unwrap();
            let p = check_pair_bounds(&run_pcp(&inst, &pcp).unwrap(), Algo::Pcp, &pcp).unwrap();
            assert!(a.holds() && p.holds(), "seed {seed}");
            assert!(per_job_slack(&run_pcp(&inst, &pcp).unwrap(), pcp.alpha) >= -inst.tolerance());
        }
    }
}
