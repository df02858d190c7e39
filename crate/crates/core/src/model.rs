//! Jobs, instances, tasks and realized schedules.
//!
//! A [`Job`] can be executed untested in `upper_limit` time, or tested in
//! `test_time` and then executed in its hidden `proc_time`. Everything here is
//! an immutable value once built; the algorithms in [`crate::online`] produce
//! [`Schedule`]s and the analysis code only reads them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Job identifier. Ids are the global tie-breaker for every ordering.
pub type JobId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub id: JobId,
    #[serde(rename = "t")]
    pub test_time: f64,
    #[serde(rename = "u")]
    pub upper_limit: f64,
    /// Real processing time, only revealed to an online algorithm by testing.
    #[serde(rename = "p")]
    pub proc_time: f64,
}

impl Job {
    pub fn new(id: JobId, test_time: f64, upper_limit: f64, proc_time: f64) -> Self {
        Self {
            id,
            test_time,
            upper_limit,
            proc_time,
        }
    }

    /// Time a schedule spends on this job given the test decision.
    pub fn time_if(&self, tested: bool) -> f64 {
        if tested {
            self.test_time + self.proc_time
        } else {
            self.upper_limit
        }
    }

    /// `u / t`; infinite when the test is free.
    pub fn ratio(&self) -> f64 {
        if self.test_time == 0.0 {
            f64::INFINITY
        } else {
            self.upper_limit / self.test_time
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("instance has no jobs")]
    EmptyInstance,
    #[error("machine count must be at least 1, got {0}")]
    BadMachineCount(usize),
    #[error("job {id}: {field} must be finite and non-negative, got {value}")]
    NegativeDuration {
        id: JobId,
        field: &'static str,
        value: f64,
    },
    #[error("job {id}: processing time {p} exceeds upper limit {u}")]
    PExceedsU { id: JobId, p: f64, u: f64 },
    #[error("duplicate job id {0}")]
    DuplicateId(JobId),
    #[error("malformed JSON: {0}")]
    SyntaxError(String),
    #[error("instance document does not match the schema: {0}")]
    SchemaError(String),
    #[error("{0}")]
    Precondition(String),
}

/// Serializes in the instance file format; parsing goes through
/// [`crate::json::parse_instance`] so that it is validated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    #[serde(rename = "m")]
    pub machines: usize,
    pub jobs: Vec<Job>,
}

impl Instance {
    /// Builds and validates a single-machine instance.
    pub fn new(jobs: Vec<Job>) -> Result<Self, ModelError> {
        Self::with_machines(jobs, 1)
    }

    pub fn with_machines(jobs: Vec<Job>, machines: usize) -> Result<Self, ModelError> {
        let inst = Self { machines, jobs };
        validate_instance(&inst)?;
        Ok(inst)
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    /// Position of a job id in `jobs`.
    pub fn index_of(&self, id: JobId) -> Option<usize> {
        self.jobs.iter().position(|j| j.id == id)
    }

    /// Largest `t`, `u` or `p` in the instance (at least 1.0); used to scale
    /// absolute tolerances.
    pub fn max_duration(&self) -> f64 {
        self.jobs
            .iter()
            .flat_map(|j| [j.test_time, j.upper_limit, j.proc_time])
            .fold(1.0, f64::max)
    }

    /// Absolute tolerance `1e-9 * n * max duration` for inequality checks.
    pub fn tolerance(&self) -> f64 {
        1e-9 * self.len() as f64 * self.max_duration()
    }
}

/// Checks every instance invariant, reporting the first violation found.
pub fn validate_instance(inst: &Instance) -> Result<(), ModelError> {
    if inst.machines == 0 {
        return Err(ModelError::BadMachineCount(inst.machines));
    }
    if inst.jobs.is_empty() {
        return Err(ModelError::EmptyInstance);
    }
    let mut seen = HashSet::with_capacity(inst.jobs.len());
    for job in &inst.jobs {
        for (field, value) in [
            ("t", job.test_time),
            ("u", job.upper_limit),
            ("p", job.proc_time),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(ModelError::NegativeDuration {
                    id: job.id,
                    field,
                    value,
                });
            }
        }
        if job.proc_time > job.upper_limit {
            return Err(ModelError::PExceedsU {
                id: job.id,
                p: job.proc_time,
                u: job.upper_limit,
            });
        }
        if !seen.insert(job.id) {
            return Err(ModelError::DuplicateId(job.id));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Test,
    Exec,
    ExecUntested,
}

/// One atomic unit of work. `weight` is the priority key the task was queued
/// with; it is fixed when the task is created.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub job: JobId,
    pub kind: TaskKind,
    pub duration: f64,
    pub weight: f64,
}

impl Task {
    pub fn test(job: &Job, weight: f64) -> Self {
        Self {
            job: job.id,
            kind: TaskKind::Test,
            duration: job.test_time,
            weight,
        }
    }

    pub fn exec(job: &Job, weight: f64) -> Self {
        Self {
            job: job.id,
            kind: TaskKind::Exec,
            duration: job.proc_time,
            weight,
        }
    }

    pub fn untested(job: &Job) -> Self {
        Self {
            job: job.id,
            kind: TaskKind::ExecUntested,
            duration: job.upper_limit,
            weight: job.upper_limit,
        }
    }

    pub fn key(&self) -> TaskRef {
        TaskRef {
            job: self.job,
            kind: self.kind,
        }
    }
}

/// Identifies a task within a schedule: each job has at most one task of
/// each kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaskRef {
    pub job: JobId,
    pub kind: TaskKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedTask {
    pub task: Task,
    pub machine: usize,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("job {0} has no completing task")]
    MissingCompletion(JobId),
    #[error("job {0} has more than one completing task")]
    DoubleCompletion(JobId),
    #[error("job {0} is executed without a preceding test")]
    ExecWithoutTest(JobId),
    #[error("job {0}: execution starts before its test ends")]
    Precedence(JobId),
    #[error("machine {0}: tasks overlap or are out of order")]
    Overlap(usize),
    #[error("single-machine schedule has an idle gap at {0}")]
    Gap(f64),
    #[error("job {0}: recorded completion does not match its last task")]
    CompletionMismatch(JobId),
    #[error("task {0:?} refers to an unknown job")]
    UnknownJob(TaskRef),
    #[error("machine index {0} out of range")]
    BadMachine(usize),
}

/// A fully realized timeline.
///
/// `completion[i]` and `tested[i]` are aligned with `instance.jobs[i]`.
/// List schedulers also record the global list order they dispatched from.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub instance: Instance,
    pub machines: usize,
    pub placed: Vec<PlacedTask>,
    pub completion: Vec<f64>,
    pub tested: Vec<bool>,
    pub list_order: Option<Vec<TaskRef>>,
}

impl Schedule {
    /// Assembles a schedule from placed tasks, deriving completions and test
    /// flags, then checks the invariants.
    pub fn from_placed(
        instance: &Instance,
        machines: usize,
        mut placed: Vec<PlacedTask>,
    ) -> Result<Self, ScheduleError> {
        placed.sort_by(|a, b| {
            a.start
                .total_cmp(&b.start)
                .then(a.end.total_cmp(&b.end))
                .then(a.machine.cmp(&b.machine))
        });
        let n = instance.len();
        let mut completion = vec![f64::NAN; n];
        let mut tested = vec![false; n];
        for pt in &placed {
            let idx = instance
                .index_of(pt.task.job)
                .ok_or(ScheduleError::UnknownJob(pt.task.key()))?;
            match pt.task.kind {
                TaskKind::Test => tested[idx] = true,
                TaskKind::Exec | TaskKind::ExecUntested => {
                    if !completion[idx].is_nan() {
                        return Err(ScheduleError::DoubleCompletion(pt.task.job));
                    }
                    completion[idx] = pt.end;
                }
            }
        }
        let s = Self {
            instance: instance.clone(),
            machines,
            placed,
            completion,
            tested,
            list_order: None,
        };
        s.check()?;
        Ok(s)
    }

    pub fn with_list_order(mut self, order: Vec<TaskRef>) -> Self {
        self.list_order = Some(order);
        self
    }

    pub fn completion_of(&self, id: JobId) -> Option<f64> {
        self.instance.index_of(id).map(|i| self.completion[i])
    }

    pub fn tested_of(&self, id: JobId) -> Option<bool> {
        self.instance.index_of(id).map(|i| self.tested[i])
    }

    /// Time the schedule spends on the job at position `idx`.
    pub fn alg_time(&self, idx: usize) -> f64 {
        self.instance.jobs[idx].time_if(self.tested[idx])
    }

    pub fn find(&self, task: TaskRef) -> Option<&PlacedTask> {
        self.placed.iter().find(|p| p.task.key() == task)
    }

    /// Placed tasks in timeline order on one machine.
    pub fn on_machine(&self, machine: usize) -> impl Iterator<Item = &PlacedTask> {
        self.placed.iter().filter(move |p| p.machine == machine)
    }

    pub fn total_completion(&self) -> f64 {
        self.completion.iter().sum()
    }

    pub fn makespan(&self) -> f64 {
        self.completion.iter().copied().fold(0.0, f64::max)
    }

    /// Verifies the structural invariants of a realized schedule.
    pub fn check(&self) -> Result<(), ScheduleError> {
        let inst = &self.instance;
        for (idx, job) in inst.jobs.iter().enumerate() {
            let finishing = if self.tested[idx] {
                TaskKind::Exec
            } else {
                TaskKind::ExecUntested
            };
            let last = self
                .find(TaskRef {
                    job: job.id,
                    kind: finishing,
                })
                .ok_or(ScheduleError::MissingCompletion(job.id))?;
            if self.completion[idx] != last.end {
                return Err(ScheduleError::CompletionMismatch(job.id));
            }
            let other = if self.tested[idx] {
                TaskKind::ExecUntested
            } else {
                TaskKind::Exec
            };
            if self
                .find(TaskRef {
                    job: job.id,
                    kind: other,
                })
                .is_some()
            {
                return Err(if self.tested[idx] {
                    ScheduleError::DoubleCompletion(job.id)
                } else {
                    ScheduleError::ExecWithoutTest(job.id)
                });
            }
            if self.tested[idx] {
                let test = self
                    .find(TaskRef {
                        job: job.id,
                        kind: TaskKind::Test,
                    })
                    .expect("tested flag implies a test task");
                if last.start < test.end {
                    return Err(ScheduleError::Precedence(job.id));
                }
            }
        }
        for m in 0..self.machines {
            let mut prev_end = 0.0f64;
            for pt in self.on_machine(m) {
                if pt.start < prev_end || pt.end < pt.start {
                    return Err(ScheduleError::Overlap(m));
                }
                if self.machines == 1 && pt.start != prev_end {
                    return Err(ScheduleError::Gap(prev_end));
                }
                prev_end = pt.end;
            }
        }
        if let Some(pt) = self.placed.iter().find(|p| p.machine >= self.machines) {
            return Err(ScheduleError::BadMachine(pt.machine));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(t: f64, u: f64, p: f64) -> Instance {
        Instance {
            machines: 1,
            jobs: vec![Job::new(0, t, u, p)],
        }
    }

    #[test]
    fn accepts_pair_family_job() {
        assert_eq!(validate_instance(&one(1.0, 1.4, 1.2)), Ok(()));
    }

    #[test]
    fn accepts_p_equal_u() {
        assert_eq!(validate_instance(&one(1.0, 1.0, 1.0)), Ok(()));
    }

    #[test]
    fn rejects_p_above_u() {
        assert!(matches!(
            validate_instance(&one(1.0, 1.0, 1.5)),
            Err(ModelError::PExceedsU { id: 0, .. })
        ));
    }

    #[test]
    fn rejects_negative_and_non_finite() {
        assert!(matches!(
            validate_instance(&one(-1.0, 1.0, 0.5)),
            Err(ModelError::NegativeDuration { field: "t", .. })
        ));
        assert!(matches!(
            validate_instance(&one(1.0, f64::INFINITY, 0.5)),
            Err(ModelError::NegativeDuration { field: "u", .. })
        ));
    }

    #[test]
    fn rejects_structural_problems() {
        let dup = Instance {
            machines: 1,
            jobs: vec![Job::new(3, 1.0, 1.0, 0.0), Job::new(3, 1.0, 2.0, 0.0)],
        };
        assert_eq!(validate_instance(&dup), Err(ModelError::DuplicateId(3)));
        let empty = Instance {
            machines: 1,
            jobs: vec![],
        };
        assert_eq!(validate_instance(&empty), Err(ModelError::EmptyInstance));
        let mut zero_m = one(1.0, 1.0, 1.0);
        zero_m.machines = 0;
        assert_eq!(
            validate_instance(&zero_m),
            Err(ModelError::BadMachineCount(0))
        );
    }

    #[test]
    fn schedule_check_catches_precedence() {
        let inst = one(1.0, 4.0, 1.0);
        let job = inst.jobs[0];
        let placed = vec![
            PlacedTask {
                task: Task::exec(&job, 2.0),
                machine: 0,
                start: 0.0,
                end: 1.0,
            },
            PlacedTask {
                task: Task::test(&job, 1.0),
                machine: 0,
                start: 1.0,
                end: 2.0,
            },
        ];
        assert_eq!(
            Schedule::from_placed(&inst, 1, placed).unwrap_err(),
            ScheduleError::Precedence(0)
        );
    }
}
