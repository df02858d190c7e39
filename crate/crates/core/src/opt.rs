//! The clairvoyant optimum.
//!
//! Knowing every `p` in advance, the optimum spends `p* = min(u, t + p)` on
//! each job and runs jobs shortest-`p*` first. On identical parallel
//! machines the same order, list-scheduled onto the earliest free machine,
//! minimizes total completion time.

use crate::model::{Instance, Job, JobId};

pub fn opt_time(job: &Job) -> f64 {
    job.upper_limit.min(job.test_time + job.proc_time)
}

/// Jobs in ascending `(p*, id)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct OptOrder {
    pub order: Vec<JobId>,
    /// `p*` aligned with `order`.
    pub pstar: Vec<f64>,
    /// `rank[i]` is the position in `order` of `instance.jobs[i]`.
    pub rank: Vec<usize>,
}

impl OptOrder {
    /// `true` when job at instance position `a` precedes the one at `b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }
}

pub fn opt_order(inst: &Instance) -> OptOrder {
    let mut idx: Vec<usize> = (0..inst.len()).collect();
    let pstar_of: Vec<f64> = inst.jobs.iter().map(opt_time).collect();
    idx.sort_by(|&a, &b| {
        pstar_of[a]
            .total_cmp(&pstar_of[b])
            .then(inst.jobs[a].id.cmp(&inst.jobs[b].id))
    });
    let mut rank = vec![0; inst.len()];
    for (pos, &i) in idx.iter().enumerate() {
        rank[i] = pos;
    }
    OptOrder {
        order: idx.iter().map(|&i| inst.jobs[i].id).collect(),
        pstar: idx.iter().map(|&i| pstar_of[i]).collect(),
        rank,
    }
}

/// Optimal total completion time on one machine (ignores `inst.machines`).
pub fn opt_cost_single(inst: &Instance) -> f64 {
    let mut clock = 0.0;
    let mut total = 0.0;
    for p in opt_order(inst).pstar {
        clock += p;
        total += clock;
    }
    total
}

/// Optimal total completion time on `m` identical machines.
pub fn opt_cost_parallel(inst: &Instance, m: usize) -> f64 {
    assert!(m >= 1, "need at least one machine");
    let mut free = vec![0.0f64; m];
    let mut total = 0.0;
    for p in opt_order(inst).pstar {
        // earliest free machine, lowest index on ties
        let (slot, _) = free
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("m >= 1");
        free[slot] += p;
        total += free[slot];
    }
    total
}

/// `max(sum p*, (1/m) sum_j j*q_j + (1/2 - 1/(2m)) sum p*)` where `q` is `p*`
/// sorted non-increasingly and `j` is the 1-based position in that order.
pub fn opt_parallel_lower_bound(inst: &Instance, m: usize) -> f64 {
    assert!(m >= 1, "need at least one machine");
    let mut q: Vec<f64> = inst.jobs.iter().map(opt_time).collect();
    q.sort_by(|a, b| b.total_cmp(a));
    let sum: f64 = q.iter().sum();
    let weighted: f64 = q.iter().enumerate().map(|(i, &p)| (i + 1) as f64 * p).sum();
    let m = m as f64;
    sum.max(weighted / m + (0.5 - 0.5 / m) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_pair_family;

    fn with_pstar(ps: &[f64]) -> Instance {
        // untested optimum: u = p*, t large enough that testing never helps
        Instance::new(
            ps.iter()
                .enumerate()
                .map(|(i, &p)| Job::new(i as u64, p + 1.0, p, 0.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn opt_time_cases() {
        assert_eq!(opt_time(&Job::new(0, 1.0, 1.4, 1.2)), 1.4);
        assert_eq!(opt_time(&Job::new(0, 1.0, 4.0, 0.0)), 1.0);
        assert_eq!(opt_time(&Job::new(0, 2.0, 1.0, 0.5)), 1.0);
    }

    #[test]
    fn pair_family_order() {
        let inst = gen_pair_family(0.1).unwrap();
        let o = opt_order(&inst);
        assert_eq!(o.order, vec![0, 1]);
        assert!((o.pstar[0] - 1.3).abs() < 1e-15);
        assert!((o.pstar[1] - 1.4).abs() < 1e-15);
        assert!((opt_cost_single(&inst) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn order_ties_and_sorting() {
        let inst = with_pstar(&[3.0, 1.0, 2.0]);
        assert_eq!(opt_order(&inst).order, vec![1, 2, 0]);
        let tied = with_pstar(&[2.0, 2.0]);
        assert_eq!(opt_order(&tied).order, vec![0, 1]);
    }

    #[test]
    fn single_machine_costs() {
        assert_eq!(opt_cost_single(&with_pstar(&[2.5])), 2.5);
        assert_eq!(opt_cost_single(&with_pstar(&[1.0, 1.0, 1.0])), 6.0);
    }

    #[test]
    fn parallel_costs() {
        let inst = with_pstar(&[1.0, 2.0, 3.0]);
        assert_eq!(opt_cost_parallel(&inst, 2), 7.0);
        assert_eq!(opt_cost_parallel(&inst, 3), 6.0);
        assert_eq!(opt_cost_parallel(&inst, 1), opt_cost_single(&inst));
    }

    #[test]
    fn lower_bound_values() {
        let inst = with_pstar(&[1.0, 2.0, 3.0]);
        assert_eq!(opt_parallel_lower_bound(&inst, 2), 6.5);
        assert_eq!(opt_parallel_lower_bound(&inst, 1), 10.0);
        assert_eq!(opt_parallel_lower_bound(&with_pstar(&[4.0]), 3), 4.0);
    }
}
