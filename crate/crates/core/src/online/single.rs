use crate::model::{Instance, PlacedTask, Schedule, Task, TaskKind};

use super::{initial_queue, require_single, AlgoParams, RunError, TaskQueue};

/// Weight given to the execution task re-inserted after a test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecWeight {
    /// `p` (the AE queue).
    Actual,
    /// `t + p`, the job's certain total time (the PCP queue).
    Certain,
}

/// Runs the queue on one machine: repeatedly extract the minimum task, run
/// it to completion, and after a test insert the job's execution task.
pub fn queue_execution(inst: &Instance, mut queue: TaskQueue, exec: ExecWeight) -> Schedule {
    let mut clock = 0.0;
    let mut placed = Vec::with_capacity(2 * inst.len());
    while let Some(task) = queue.pop() {
        let start = clock;
        clock += task.duration;
        placed.push(PlacedTask {
            task,
            machine: 0,
            start,
            end: clock,
        });
        if task.kind == TaskKind::Test {
            let job = &inst.jobs[inst.index_of(task.job).expect("queued job exists")];
            let weight = match exec {
                ExecWeight::Actual => job.proc_time,
                ExecWeight::Certain => job.test_time + job.proc_time,
            };
            queue.push(Task::exec(job, weight));
        }
    }
    Schedule::from_placed(inst, 1, placed).expect("queue execution yields a valid schedule")
}

/// The AE algorithm: threshold test rule, tests weighted `beta * t`,
/// executions weighted `p`.
pub fn run_ae(inst: &Instance, params: &AlgoParams) -> Result<Schedule, RunError> {
    require_single("AE", inst.machines)?;
    Ok(queue_execution(
        inst,
        initial_queue(inst, params),
        ExecWeight::Actual,
    ))
}

/// PCP: as AE, but a tested job re-enters the queue with weight `t + p`.
pub fn run_pcp(inst: &Instance, params: &AlgoParams) -> Result<Schedule, RunError> {
    require_single("PCP", inst.machines)?;
    Ok(queue_execution(
        inst,
        initial_queue(inst, params),
        ExecWeight::Certain,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_pair_family;
    use crate::model::{Job, TaskRef};
    use crate::online::{GOLDEN_RATIO, PCP_BETA};

    fn order(s: &Schedule) -> Vec<(u64, TaskKind)> {
        s.placed.iter().map(|p| (p.task.job, p.task.kind)).collect()
    }

    #[test]
    fn ae_pair_family_interleaves() {
        let inst = gen_pair_family(0.1).unwrap();
        let s = run_ae(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).unwrap();
        // k = 0, j = 1: t_j, t_k, p_j, p_k
        assert_eq!(
            order(&s),
            vec![
                (1, TaskKind::Test),
                (0, TaskKind::Test),
                (1, TaskKind::Exec),
                (0, TaskKind::Exec)
            ]
        );
        assert!((s.completion_of(1).unwrap() - 3.3).abs() < 1e-12);
        assert!((s.completion_of(0).unwrap() - 4.6).abs() < 1e-12);
        assert!((s.total_completion() - 7.9).abs() < 1e-12);
    }

    #[test]
    fn pcp_pair_family() {
        let inst = gen_pair_family(0.1).unwrap();
        let s = run_pcp(&inst, &AlgoParams::new(GOLDEN_RATIO, PCP_BETA).unwrap()).unwrap();
        assert_eq!(
            order(&s),
            vec![(0, TaskKind::ExecUntested), (1, TaskKind::ExecUntested)]
        );
        assert!((s.total_completion() - 4.0).abs() < 1e-12);

        let unit = run_pcp(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).unwrap();
        let ae = run_ae(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(order(&unit), order(&ae));
        assert!((unit.total_completion() - 7.9).abs() < 1e-12);
    }

    #[test]
    fn single_untested_job() {
        let inst = Instance::new(vec![Job::new(0, 3.0, 2.0, 1.0)]).unwrap();
        let s = run_ae(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(s.completion, vec![2.0]);
        assert_eq!(s.tested, vec![false]);
    }

    #[test]
    fn exec_weight_with_zero_p_is_test_time() {
        let inst = Instance::new(vec![Job::new(0, 1.5, 4.0, 0.0)]).unwrap();
        let s = run_pcp(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).unwrap();
        let exec = s
            .find(TaskRef {
                job: 0,
                kind: TaskKind::Exec,
            })
            .unwrap();
        assert_eq!(exec.task.weight, 1.5);
    }

    #[test]
    fn rejects_parallel_instances() {
        let mut inst = gen_pair_family(0.1).unwrap();
        inst.machines = 2;
        assert!(matches!(
            run_pcp(&inst, &AlgoParams::new(1.0, 1.0).unwrap()),
            Err(RunError::MachineCountUnsupported { machines: 2, .. })
        ));
        assert!(run_ae(&inst, &AlgoParams::new(1.0, 1.0).unwrap()).is_err());
    }
}
