//! Event-driven list scheduling on identical machines.
//!
//! Whenever a machine is idle and an available task is pending, the
//! highest-priority available task is started. An execution task becomes
//! available only when its test ends.
//!
//! A task goes to the lowest-index machine that finished work at the current
//! instant, or else to the lowest-index idle machine. As a consequence no
//! machine resumes after idling: every busy period starts at 0.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::model::{Instance, Job, PlacedTask, Schedule, Task, TaskKind, TaskRef};

use super::{threshold_decisions, AlgoParams, RunError};

/// Position of a task in the scheduler's priority list.
#[derive(Debug, Clone, Copy)]
struct ListEntry {
    phase: u8,
    task: Task,
}

impl ListEntry {
    fn new(phase: u8, task: Task) -> Self {
        Self { phase, task }
    }
}

impl PartialEq for ListEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ListEntry {}

impl PartialOrd for ListEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ListEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.phase
            .cmp(&other.phase)
            .then(self.task.weight.total_cmp(&other.task.weight))
            .then(self.task.job.cmp(&other.task.job))
            .then(self.task.kind.cmp(&other.task.kind))
    }
}

#[derive(Debug, Clone, Copy)]
struct Running {
    end: f64,
    task: Task,
}

/// Core loop shared by the parallel algorithms. `exec_entry` builds the
/// list entry of a job's execution task once its test finishes.
fn list_schedule(
    inst: &Instance,
    machines: usize,
    initial: Vec<ListEntry>,
    exec_entry: impl Fn(&Job) -> ListEntry,
) -> Schedule {
    let mut available: BinaryHeap<Reverse<ListEntry>> = BinaryHeap::new();
    let mut every: Vec<ListEntry> = Vec::with_capacity(2 * inst.len());
    for e in initial {
        every.push(e);
        available.push(Reverse(e));
    }
    let mut running: Vec<Option<Running>> = vec![None; machines];
    let mut last_end = vec![0.0f64; machines];
    let mut placed = Vec::with_capacity(2 * inst.len());
    let mut now = 0.0f64;

    loop {
        // release everything finishing by `now`, in machine order
        for slot in running.iter_mut() {
            if let Some(r) = *slot {
                if r.end <= now {
                    *slot = None;
                    if r.task.kind == TaskKind::Test {
                        let job = &inst.jobs[inst.index_of(r.task.job).expect("known job")];
                        let e = exec_entry(job);
                        every.push(e);
                        available.push(Reverse(e));
                    }
                }
            }
        }
        while let Some(machine) = running
            .iter()
            .zip(&last_end)
            .position(|(r, &e)| r.is_none() && e == now)
            .or_else(|| running.iter().position(Option::is_none))
        {
            let Some(Reverse(entry)) = available.pop() else {
                break;
            };
            last_end[machine] = now + entry.task.duration;
            let end = now + entry.task.duration;
            running[machine] = Some(Running {
                end,
                task: entry.task,
            });
            placed.push(PlacedTask {
                task: entry.task,
                machine,
                start: now,
                end,
            });
        }
        match running
            .iter()
            .flatten()
            .map(|r| r.end)
            .min_by(f64::total_cmp)
        {
            Some(next) => now = next,
            None => break,
        }
    }
    debug_assert!(available.is_empty());
    every.sort();
    let order: Vec<TaskRef> = every.iter().map(|e| e.task.key()).collect();
    Schedule::from_placed(inst, machines, placed)
        .expect("list scheduling yields a valid schedule")
        .with_list_order(order)
}

fn require_machines(machines: usize) -> Result<(), RunError> {
    if machines == 0 {
        Err(RunError::BadParams("need at least one machine".into()))
    } else {
        Ok(())
    }
}

/// PCP on `machines` identical machines: the threshold rule and queue
/// weights of the single-machine algorithm, dispatched by list scheduling.
pub fn run_pcp_parallel(
    inst: &Instance,
    machines: usize,
    params: &AlgoParams,
) -> Result<Schedule, RunError> {
    require_machines(machines)?;
    let initial = inst
        .jobs
        .iter()
        .zip(threshold_decisions(inst, params.alpha))
        .map(|(job, test)| {
            ListEntry::new(
                0,
                if test {
                    Task::test(job, params.beta * job.test_time)
                } else {
                    Task::untested(job)
                },
            )
        })
        .collect();
    Ok(list_schedule(inst, machines, initial, |job| {
        ListEntry::new(0, Task::exec(job, job.test_time + job.proc_time))
    }))
}

/// Three-phase list for uniform testing times: untested jobs (`u < alpha t`)
/// by `u`, then all tests by id, then executions by `p`.
pub fn run_uniform_parallel(
    inst: &Instance,
    machines: usize,
    alpha: f64,
) -> Result<Schedule, RunError> {
    require_machines(machines)?;
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(RunError::BadParams(format!(
            "alpha must be >= 1, got {alpha}"
        )));
    }
    let t0 = inst.jobs[0].test_time;
    if let Some(odd) = inst.jobs.iter().find(|j| j.test_time != t0) {
        return Err(RunError::NonUniformTesting(odd.id));
    }
    let initial = inst
        .jobs
        .iter()
        .zip(threshold_decisions(inst, alpha))
        .map(|(job, test)| {
            if test {
                ListEntry::new(1, Task::test(job, 0.0))
            } else {
                ListEntry::new(0, Task::untested(job))
            }
        })
        .collect();
    Ok(list_schedule(inst, machines, initial, |job| {
        ListEntry::new(2, Task::exec(job, job.proc_time))
    }))
}
