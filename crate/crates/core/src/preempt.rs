//! Preemptive single-machine schedules and right-merging.
//!
//! A preemptive schedule is a gapless sequence of pieces; a job's test and
//! execution may each be split into several pieces. Right-merging rewrites
//! `(s_i, S, s_{i+1})` into `(S, s_i, s_{i+1})` for consecutive pieces `s_i`,
//! `s_{i+1}` of one job. Every job in `S` finishes earlier and the merged
//! job's completion is unchanged, so total completion time cannot grow.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gen::{gen_random_instance, GenConfig};
use crate::model::{Instance, JobId, ModelError, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub job: JobId,
    pub kind: TaskKind,
    /// Position among the job's pieces, starting at 0.
    pub index: usize,
    pub duration: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PreemptError {
    #[error("job {job} has no pieces {index} and {next}", next = index + 1)]
    NoSuchPiece { job: JobId, index: usize },
    #[error("pieces {index} and {next} of job {job} are already adjacent", next = index + 1)]
    AlreadyContiguous { job: JobId, index: usize },
    #[error("invalid preemptive schedule: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreemptiveSchedule {
    pub instance: Instance,
    pieces: Vec<Piece>,
}

impl PreemptiveSchedule {
    /// Checks that each job's pieces are numbered in sequence order, that
    /// tests precede executions, and that the piece lengths add up to the
    /// job's test and execution times.
    pub fn new(instance: Instance, pieces: Vec<Piece>) -> Result<Self, PreemptError> {
        let bad = |msg: String| Err(PreemptError::Invalid(msg));
        let tol = instance.tolerance();
        for job in &instance.jobs {
            let mine: Vec<&Piece> = pieces.iter().filter(|p| p.job == job.id).collect();
            if mine.is_empty() {
                return bad(format!("job {} has no pieces", job.id));
            }
            if mine.iter().enumerate().any(|(i, p)| p.index != i) {
                return bad(format!("pieces of job {} are out of order", job.id));
            }
            if mine
                .iter()
                .any(|p| !(p.duration >= 0.0 && p.duration.is_finite()))
            {
                return bad(format!("job {} has a negative piece", job.id));
            }
            let sum = |kind| -> f64 {
                mine.iter()
                    .filter(|p| p.kind == kind)
                    .map(|p| p.duration)
                    .sum()
            };
            let has = |kind| mine.iter().any(|p| p.kind == kind);
            let untested = has(TaskKind::ExecUntested);
            if untested && (has(TaskKind::Test) || has(TaskKind::Exec)) {
                return bad(format!("job {} is both tested and untested", job.id));
            }
            if untested {
                if (sum(TaskKind::ExecUntested) - job.upper_limit).abs() > tol {
                    return bad(format!("untested pieces of job {} do not sum to u", job.id));
                }
                continue;
            }
            let first_exec = mine.iter().position(|p| p.kind == TaskKind::Exec);
            let last_test = mine.iter().rposition(|p| p.kind == TaskKind::Test);
            match (last_test, first_exec) {
                (Some(lt), Some(fe)) if lt < fe => {}
                _ => {
                    return bad(format!(
                        "job {} needs test pieces then execution pieces",
                        job.id
                    ))
                }
            }
            if (sum(TaskKind::Test) - job.test_time).abs() > tol
                || (sum(TaskKind::Exec) - job.proc_time).abs() > tol
            {
                return bad(format!("pieces of job {} do not sum to t and p", job.id));
            }
        }
        if let Some(p) = pieces.iter().find(|p| instance.index_of(p.job).is_none()) {
            return bad(format!("piece of unknown job {}", p.job));
        }
        Ok(Self { instance, pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Pieces with their start and end times, packed from 0.
    pub fn timeline(&self) -> Vec<(Piece, f64, f64)> {
        let mut clock = 0.0;
        self.pieces
            .iter()
            .map(|&p| {
                let start = clock;
                clock += p.duration;
                (p, start, clock)
            })
            .collect()
    }

    pub fn completion_of(&self, job: JobId) -> Option<f64> {
        self.timeline()
            .into_iter()
            .rev()
            .find(|(p, _, _)| p.job == job)
            .map(|(_, _, end)| end)
    }

    pub fn total_completion(&self) -> f64 {
        let mut last = vec![0.0; self.instance.len()];
        for (p, _, end) in self.timeline() {
            last[self.instance.index_of(p.job).expect("validated")] = end;
        }
        last.iter().sum()
    }

    fn position(&self, job: JobId, index: usize) -> Option<usize> {
        self.pieces
            .iter()
            .position(|p| p.job == job && p.index == index)
    }

    /// Whether every job's pieces form one block.
    pub fn is_non_preemptive(&self) -> bool {
        self.first_gap().is_none()
    }

    /// Lowest job id, then lowest piece index, whose next piece is not
    /// directly after it.
    fn first_gap(&self) -> Option<(JobId, usize)> {
        let mut ids: Vec<JobId> = self.instance.jobs.iter().map(|j| j.id).collect();
        ids.sort_unstable();
        ids.into_iter().find_map(|job| {
            let at: Vec<usize> = self
                .pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| p.job == job)
                .map(|(i, _)| i)
                .collect();
            at.windows(2)
                .position(|w| w[1] != w[0] + 1)
                .map(|i| (job, i))
        })
    }

    /// Moves piece `index` of `job` right, next to piece `index + 1`.
    pub fn right_merge(&self, job: JobId, index: usize) -> Result<Self, PreemptError> {
        let missing = PreemptError::NoSuchPiece { job, index };
        let a = self.position(job, index).ok_or(missing.clone())?;
        let b = self.position(job, index + 1).ok_or(missing)?;
        if b == a + 1 {
            return Err(PreemptError::AlreadyContiguous { job, index });
        }
        let mut pieces = self.pieces.clone();
        let moved = pieces.remove(a);
        pieces.insert(b - 1, moved);
        Ok(Self {
            instance: self.instance.clone(),
            pieces,
        })
    }

    /// Right-merges until every job is contiguous, lowest job id and lowest
    /// piece index first.
    pub fn fully_merge(&self) -> Self {
        self.merge_steps().pop().unwrap_or_else(|| self.clone())
    }

    /// Every intermediate schedule of `fully_merge`, in order, excluding
    /// `self`.
    pub fn merge_steps(&self) -> Vec<Self> {
        let limit = self.pieces.len() * self.pieces.len();
        let mut steps: Vec<Self> = Vec::new();
        while let Some((job, index)) = steps.last().unwrap_or(self).first_gap() {
            let next = steps
                .last()
                .unwrap_or(self)
                .right_merge(job, index)
                .expect("gap found above");
            steps.push(next);
            assert!(steps.len() <= limit, "merging does not terminate");
        }
        steps
    }
}

/// Random preemptive schedule over a random instance: each job is tested
/// with probability 1/2, its tasks are cut into up to `max_cuts + 1` pieces,
/// and the pieces of all jobs are interleaved at random.
pub fn gen_random_preemptive(
    cfg: &GenConfig,
    max_cuts: usize,
) -> Result<PreemptiveSchedule, PreemptError> {
    let inst = gen_random_instance(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x005e_ed0f_c075);
    let split = |kind: TaskKind, total: f64, rng: &mut ChaCha8Rng| -> Vec<(TaskKind, f64)> {
        let k = rng.random_range(0..=max_cuts) + 1;
        let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
        let sum: f64 = w.iter().sum();
        let mut parts: Vec<(TaskKind, f64)> = w.iter().map(|x| (kind, total * x / sum)).collect();
        // the last part absorbs rounding
        let head: f64 = parts[..k - 1].iter().map(|p| p.1).sum();
        parts[k - 1].1 = (total - head).max(0.0);
        parts
    };
    let mut queues: Vec<std::collections::VecDeque<Piece>> = inst
        .jobs
        .iter()
        .map(|job| {
            let parts = if rng.random_bool(0.5) {
                let mut v = split(TaskKind::Test, job.test_time, &mut rng);
                v.extend(split(TaskKind::Exec, job.proc_time, &mut rng));
                v
            } else {
                split(TaskKind::ExecUntested, job.upper_limit, &mut rng)
            };
            parts
                .into_iter()
                .enumerate()
                .map(|(index, (kind, duration))| Piece {
                    job: job.id,
                    kind,
                    index,
                    duration,
                })
                .collect()
        })
        .collect();
    let mut pieces = Vec::new();
    loop {
        let open: Vec<usize> = (0..queues.len())
            .filter(|&i| !queues[i].is_empty())
            .collect();
        if open.is_empty() {
            break;
        }
        let pick = open[rng.random_range(0..open.len())];
        pieces.push(queues[pick].pop_front().expect("non-empty"));
    }
    PreemptiveSchedule::new(inst, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

    fn piece(job: JobId, index: usize, duration: f64) -> Piece {
        Piece {
            job,
            kind: TaskKind::ExecUntested,
            index,
            duration,
        }
    }

    fn split_example() -> PreemptiveSchedule {
        let inst =
            Instance::new(vec![Job::new(0, 5.0, 2.0, 0.0), Job::new(1, 5.0, 1.0, 0.0)]).unwrap();
        // A1, B, A2
        PreemptiveSchedule::new(
            inst,
            vec![piece(0, 0, 1.0), piece(1, 0, 1.0), piece(0, 1, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn right_merge_example() {
        let s = split_example();
        assert_eq!(s.total_completion(), 5.0);
        let merged = s.right_merge(0, 0).unwrap();
        let order: Vec<(JobId, usize)> = merged.pieces().iter().map(|p| (p.job, p.index)).collect();
        assert_eq!(order, vec![(1, 0), (0, 0), (0, 1)]);
        assert_eq!(merged.total_completion(), 4.0);
        assert!(merged.is_non_preemptive());
        assert_eq!(s.fully_merge(), merged);
    }

    #[test]
    fn merge_errors() {
        let s = split_example();
        let merged = s.right_merge(0, 0).unwrap();
        assert_eq!(
            merged.right_merge(0, 0).unwrap_err(),
            PreemptError::AlreadyContiguous { job: 0, index: 0 }
        );
        assert_eq!(
            s.right_merge(0, 1).unwrap_err(),
            PreemptError::NoSuchPiece { job: 0, index: 1 }
        );
        assert!(matches!(
            s.right_merge(7, 0),
            Err(PreemptError::NoSuchPiece { .. })
        ));
    }

    #[test]
    fn non_preemptive_is_a_fixpoint() {
        let s = split_example().fully_merge();
        assert_eq!(s.fully_merge(), s);
        assert!(s.merge_steps().is_empty());
    }

    #[test]
    fn merge_steps_end_at_the_full_merge() {
        let s = gen_random_preemptive(&GenConfig::new(5, 3.0, 11), 3).unwrap();
        let steps = s.merge_steps();
        assert!(!steps.is_empty());
        assert_eq!(steps.last().unwrap(), &s.fully_merge());
        let mut prev = s.total_completion();
        for step in &steps {
            assert!(step.total_completion() <= prev + 1e-12);
            prev = step.total_completion();
        }
    }

    #[test]
    fn validation() {
        let inst = Instance::new(vec![Job::new(0, 1.0, 3.0, 1.0)]).unwrap();
        let test = |index, duration| Piece {
            job: 0,
            kind: TaskKind::Test,
            index,
            duration,
        };
        let exec = |index, duration| Piece {
            job: 0,
            kind: TaskKind::Exec,
            index,
            duration,
        };
        assert!(PreemptiveSchedule::new(
            inst.clone(),
            vec![test(0, 0.5), test(1, 0.5), exec(2, 1.0)]
        )
        .is_ok());
        // execution before the test is complete
        assert!(PreemptiveSchedule::new(
            inst.clone(),
            vec![test(0, 0.5), exec(1, 1.0), test(2, 0.5)]
        )
        .is_err());
        // index out of sequence
        assert!(PreemptiveSchedule::new(inst.clone(), vec![test(1, 1.0), exec(0, 1.0)]).is_err());
        // wrong total
        assert!(PreemptiveSchedule::new(inst, vec![test(0, 1.0), exec(1, 0.5)]).is_err());
    }

    #[test]
    fn random_schedules_merge_monotonically() {
        for seed in 0..200 {
            let s = gen_random_preemptive(&GenConfig::new(4, 3.0, seed), 3).unwrap();
            let full = s.fully_merge();
            assert!(full.is_non_preemptive());
            assert!(full.total_completion() <= s.total_completion() + 1e-12);
            let lengths = |x: &PreemptiveSchedule| {
                let mut v: Vec<(JobId, usize, u64)> = x
                    .pieces()
                    .iter()
                    .map(|p| (p.job, p.index, p.duration.to_bits()))
                    .collect();
                v.sort();
                v
            };
            assert_eq!(lengths(&s), lengths(&full));
        }
    }
}
