//! Contribution matrices.
//!
//! `c[k][j]` is the time a schedule spends on job `k` before job `j`
//! completes. On parallel machines the cut-off is instead the start of the
//! last segment of `j`, which keeps the column sums meaningful when tasks
//! overlap in time.

use crate::model::{JobId, PlacedTask, Schedule, TaskKind, TaskRef};

use super::AnalysisError;

/// Square matrix indexed by instance job position; `ids` maps positions back
/// to job ids.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionMatrix {
    pub ids: Vec<JobId>,
    values: Vec<f64>,
}

impl ContributionMatrix {
    fn zeros(ids: Vec<JobId>) -> Self {
        let n = ids.len();
        Self {
            ids,
            values: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    /// Contribution of the job at position `k` to the job at position `j`.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.n() + j]
    }

    fn add(&mut self, k: usize, j: usize, v: f64) {
        let n = self.n();
        self.values[k * n + j] += v;
    }

    pub fn by_id(&self, k: JobId, j: JobId) -> Option<f64> {
        let k = self.ids.iter().position(|&x| x == k)?;
        let j = self.ids.iter().position(|&x| x == j)?;
        Some(self.get(k, j))
    }

    pub fn column_sum(&self, j: usize) -> f64 {
        (0..self.n()).map(|k| self.get(k, j)).sum()
    }
}

/// Single-machine contributions, including the diagonal `c[j][j]`.
pub fn contributions(s: &Schedule) -> Result<ContributionMatrix, AnalysisError> {
    if s.machines != 1 {
        return Err(AnalysisError::ParallelScheduleNeedsSegmentVariant(
            s.machines,
        ));
    }
    let inst = &s.instance;
    let pos_of = |pt: &PlacedTask| inst.index_of(pt.task.job).expect("known job");
    // timeline position of each job's completing task
    let mut last = vec![0usize; inst.len()];
    for (q, pt) in s.placed.iter().enumerate() {
        if pt.task.kind != TaskKind::Test {
            last[pos_of(pt)] = q;
        }
    }
    let mut c = ContributionMatrix::zeros(inst.jobs.iter().map(|j| j.id).collect());
    for (q, pt) in s.placed.iter().enumerate() {
        let k = pos_of(pt);
        for (j, &lj) in last.iter().enumerate() {
            if q <= lj {
                c.add(k, j, pt.task.duration);
            }
        }
    }
    Ok(c)
}

/// Start of the last segment of the job at position `idx`: its untested
/// execution, its test when the execution directly follows the test on the
/// same machine, or otherwise its execution.
pub fn last_segment_start(s: &Schedule, idx: usize) -> f64 {
    let id = s.instance.jobs[idx].id;
    let find = |kind| {
        s.find(TaskRef { job: id, kind })
            .expect("schedule holds the job's tasks")
    };
    if !s.tested[idx] {
        return find(TaskKind::ExecUntested).start;
    }
    let test = find(TaskKind::Test);
    let exec = find(TaskKind::Exec);
    if test.machine == exec.machine && test.end == exec.start {
        let mut on_machine = s.on_machine(exec.machine);
        let adjacent = on_machine
            .by_ref()
            .skip_while(|p| p.task.key() != test.task.key())
            .nth(1)
            .is_some_and(|next| next.task.key() == exec.task.key());
        if adjacent {
            return test.start;
        }
    }
    exec.start
}

/// Parallel-machine contributions: off-diagonal entries count the time spent
/// on `k` before the last segment of `j` starts; the diagonal holds the
/// total time spent on `j`.
pub fn contributions_parallel(s: &Schedule) -> ContributionMatrix {
    let inst = &s.instance;
    let n = inst.len();
    let cut: Vec<f64> = (0..n).map(|j| last_segment_start(s, j)).collect();
    let mut c = ContributionMatrix::zeros(inst.jobs.iter().map(|j| j.id).collect());
    for pt in &s.placed {
        let k = inst.index_of(pt.task.job).expect("known job");
        for (j, &cut_j) in cut.iter().enumerate() {
            if j != k && pt.start < cut_j {
                c.add(k, j, pt.end.min(cut_j) - pt.start);
            }
        }
    }
    for j in 0..n {
        c.add(j, j, s.alg_time(j));
    }
    c
}

/// Smallest value of `(1/m) sum_{k != j} c[k][j] + time(j) - C_j` over all
/// jobs. A list schedule keeps every machine busy before a job's last
/// segment, so this is never negative.
pub fn greedy_completion_slack(s: &Schedule, c: &ContributionMatrix) -> f64 {
    let m = s.machines as f64;
    (0..c.n())
        .map(|j| {
            let others: f64 = (0..c.n()).filter(|&k| k != j).map(|k| c.get(k, j)).sum();
            others / m + s.alg_time(j) - s.completion[j]
        })
        .fold(f64::INFINITY, f64::min)
}
