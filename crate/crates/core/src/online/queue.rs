use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::model::{Instance, JobId, Task};

use super::AlgoParams;

/// Heap entry ordered by `(weight, job id)`.
#[derive(Debug, Clone, Copy)]
struct Entry(Task);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .weight
            .total_cmp(&other.0.weight)
            .then(self.0.job.cmp(&other.0.job))
    }
}

/// Min-queue of pending tasks. A job owns at most one pending task, so the
/// `(weight, id)` key is a total order.
#[derive(Debug, Clone, Default)]
pub struct TaskQueue {
    heap: BinaryHeap<Reverse<Entry>>,
    pending: HashSet<JobId>,
}

impl TaskQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, task: Task) {
        let fresh = self.pending.insert(task.job);
        assert!(fresh, "job {} already has a pending task", task.job);
        self.heap.push(Reverse(Entry(task)));
    }

    pub fn pop(&mut self) -> Option<Task> {
        let Reverse(Entry(task)) = self.heap.pop()?;
        self.pending.remove(&task.job);
        Some(task)
    }

    pub fn peek(&self) -> Option<&Task> {
        self.heap.peek().map(|Reverse(Entry(t))| t)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Pending tasks in extraction order.
    pub fn to_sorted_vec(&self) -> Vec<Task> {
        let mut v: Vec<Entry> = self.heap.iter().map(|Reverse(e)| *e).collect();
        v.sort();
        v.into_iter().map(|e| e.0).collect()
    }
}

/// Builds the initial queue from explicit test decisions: a test task with
/// weight `beta * t` for tested jobs, an untested execution with weight `u`
/// otherwise.
pub fn queue_from_decisions(inst: &Instance, beta: f64, tested: &[bool]) -> TaskQueue {
    let mut q = TaskQueue::new();
    for (job, &test) in inst.jobs.iter().zip(tested) {
        q.push(if test {
            Task::test(job, beta * job.test_time)
        } else {
            Task::untested(job)
        });
    }
    q
}

/// Threshold rule: test a job iff `u >= alpha * t`.
pub fn threshold_decisions(inst: &Instance, alpha: f64) -> Vec<bool> {
    inst.jobs
        .iter()
        .map(|j| j.upper_limit >= alpha * j.test_time)
        .collect()
}

pub fn initial_queue(inst: &Instance, params: &AlgoParams) -> TaskQueue {
    queue_from_decisions(inst, params.beta, &threshold_decisions(inst, params.alpha))
}
