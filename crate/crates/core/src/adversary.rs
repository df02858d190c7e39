//! Adaptive lower-bound game for non-preemptive makespan with testing.
//!
//! The adversary releases `2m(m-1)+1` jobs with `t = 1` and `u = 2m`. Every
//! test reveals `p = 0` except for one job `j'`: the first job (lowest id on
//! ties) committed to start at time `2(m-1)` or later. If `j'` is tested its
//! processing time becomes `2m`; if it runs untested it gets `p = 0`. Either
//! way the online makespan is at least `2 - 1/(2m)` times the optimum.
//!
//! Schedulers talk to the game through [`OnlineMakespanScheduler`], one
//! decision at a time. A commitment fixes a job's machine, start time and
//! whether it is tested; a tested job's execution follows its test
//! immediately on the same machine.

use serde::Serialize;
use thiserror::Error;

use crate::gen::gen_adversary_jobs;
use crate::model::{Instance, JobId, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Commitment {
    pub job: JobId,
    pub machine: usize,
    pub test: bool,
    pub start: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reveal {
    pub job: JobId,
    pub proc_time: f64,
    /// Time at which the test ends and the value becomes visible.
    pub at: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Decision {
    Commit(Commitment),
    /// Advance the clock without committing anything.
    Wait(f64),
    Done,
}

/// What a scheduler may observe: the public job data (`t`, `u`), its own
/// commitments, and the test results visible at the current time.
#[derive(Debug, Clone, Copy)]
pub struct GameView<'a> {
    pub machines: usize,
    pub jobs: &'a Instance,
    pub clock: f64,
    pub commitments: &'a [Commitment],
    pub reveals: &'a [Reveal],
}

impl GameView<'_> {
    pub fn is_committed(&self, job: JobId) -> bool {
        self.commitments.iter().any(|c| c.job == job)
    }

    pub fn revealed(&self, job: JobId) -> Option<f64> {
        self.reveals
            .iter()
            .find(|r| r.job == job)
            .map(|r| r.proc_time)
    }
}

pub trait OnlineMakespanScheduler {
    fn name(&self) -> &str;
    fn decide(&mut self, view: &GameView<'_>) -> Decision;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Tested,
    Untested,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum Event {
    Commit(Commitment),
    Reveal(Reveal),
    Wait { until: f64 },
    Adversary { job: JobId, case: Case },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameResult {
    pub scheduler: String,
    pub machines: usize,
    pub j_prime: JobId,
    pub case: Case,
    pub alg_makespan: f64,
    pub opt_makespan: f64,
    pub ratio: f64,
    /// Latest start time over all commitments.
    pub last_start: f64,
    pub transcript: Vec<Event>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("scheduler violation: {0}")]
    SchedulerViolation(String),
    #[error("{0} jobs were never scheduled")]
    IncompleteSchedule(usize),
}

/// Start time from which a commitment can become `j'`.
pub fn late_start_threshold(m: usize) -> f64 {
    2.0 * (m as f64 - 1.0)
}

/// Optimal makespan of the realized instance in each case.
pub fn opt_makespan(m: usize, case: Case) -> f64 {
    let m = m as f64;
    match case {
        Case::Tested => 2.0 * m,
        Case::Untested => 2.0 * m - 1.0,
    }
}

struct Game {
    m: usize,
    jobs: Instance,
    clock: f64,
    commitments: Vec<Commitment>,
    /// Committed but not yet visible test results.
    pending: Vec<Reveal>,
    visible: Vec<Reveal>,
    /// End time of each committed job, once its processing time is fixed.
    ends: Vec<Option<f64>>,
    /// Late-start candidates sharing the earliest late start time.
    candidates: Vec<Commitment>,
    j_prime: Option<(JobId, Case)>,
    transcript: Vec<Event>,
}

impl Game {
    fn u(&self) -> f64 {
        2.0 * self.m as f64
    }

    fn violation<T>(msg: String) -> Result<T, AdversaryError> {
        Err(AdversaryError::SchedulerViolation(msg))
    }

    /// Fixes every committed job's processing time once the clock has moved
    /// past the candidate start time.
    fn settle(&mut self, force: bool) {
        if self.j_prime.is_none() {
            let Some(first) = self.candidates.first() else {
                return;
            };
            if !force && self.clock <= first.start {
                return;
            }
            let chosen = *self
                .candidates
                .iter()
                .min_by_key(|c| c.job)
                .expect("non-empty");
            let case = if chosen.test {
                Case::Tested
            } else {
                Case::Untested
            };
            self.j_prime = Some((chosen.job, case));
            self.transcript.push(Event::Adversary {
                job: chosen.job,
                case,
            });
            let u = self.u();
            for c in std::mem::take(&mut self.candidates) {
                let p = if c.job == chosen.job && c.test {
                    u
                } else {
                    0.0
                };
                self.fix(c, p);
            }
        }
    }

    fn fix(&mut self, c: Commitment, p: f64) {
        let end = if c.test {
            self.pending.push(Reveal {
                job: c.job,
                proc_time: p,
                at: c.start + 1.0,
            });
            c.start + 1.0 + p
        } else {
            c.start + self.u()
        };
        self.ends[c.job as usize] = Some(end);
    }

    fn publish_reveals(&mut self) {
        let clock = self.clock;
        let (now, later): (Vec<_>, Vec<_>) = self.pending.drain(..).partition(|r| r.at <= clock);
        self.pending = later;
        for r in now {
            self.transcript.push(Event::Reveal(r));
            self.visible.push(r);
        }
    }

    fn advance(&mut self, to: f64) {
        self.clock = to;
        self.settle(false);
        self.publish_reveals();
    }

    fn commit(&mut self, c: Commitment) -> Result<(), AdversaryError> {
        let idx = c.job as usize;
        if idx >= self.jobs.len() {
            return Self::violation(format!("unknown job {}", c.job));
        }
        if self.commitments.iter().any(|o| o.job == c.job) {
            return Self::violation(format!("job {} committed twice", c.job));
        }
        if c.machine >= self.m {
            return Self::violation(format!("machine {} out of range", c.machine));
        }
        if !(c.start.is_finite() && c.start >= self.clock) {
            return Self::violation(format!(
                "job {} starts at {} before the current time {}",
                c.job, c.start, self.clock
            ));
        }
        self.advance(c.start);
        let threshold = late_start_threshold(self.m);
        if self.j_prime.is_none() && c.start >= threshold {
            self.candidates.push(c);
        } else {
            self.fix(c, 0.0);
        }
        // overlap check on the machine, with unknown ends bounded below by
        // the task's own length
        let own_min = if c.test { 1.0 } else { self.u() };
        for o in self.commitments.iter().filter(|o| o.machine == c.machine) {
            let o_min = if o.test { 1.0 } else { self.u() };
            let o_end = self.ends[o.job as usize].unwrap_or(o.start + o_min);
            let disjoint = o_end <= c.start || c.start + own_min <= o.start;
            if !disjoint {
                return Self::violation(format!(
                    "job {} overlaps job {} on machine {}",
                    c.job, o.job, c.machine
                ));
            }
        }
        self.commitments.push(c);
        self.transcript.push(Event::Commit(c));
        Ok(())
    }
}

/// Plays the game against `sched` on `m >= 2` machines.
pub fn run_adversary_game(
    sched: &mut dyn OnlineMakespanScheduler,
    m: usize,
) -> Result<GameResult, AdversaryError> {
    let jobs = gen_adversary_jobs(m)?;
    let n = jobs.len();
    let mut game = Game {
        m,
        jobs,
        clock: 0.0,
        commitments: Vec::new(),
        pending: Vec::new(),
        visible: Vec::new(),
        ends: vec![None; n],
        candidates: Vec::new(),
        j_prime: None,
        transcript: Vec::new(),
    };
    let max_steps = 100 * n + 100;
    for _ in 0..max_steps {
        let view = GameView {
            machines: m,
            jobs: &game.jobs,
            clock: game.clock,
            commitments: &game.commitments,
            reveals: &game.visible,
        };
        match sched.decide(&view) {
            Decision::Commit(c) => game.commit(c)?,
            Decision::Wait(until) => {
                if !(until.is_finite() && until > game.clock) {
                    return Game::violation(format!("wait until {until} does not advance time"));
                }
                game.transcript.push(Event::Wait { until });
                game.advance(until);
            }
            Decision::Done => return finish(game, sched.name()),
        }
    }
    Game::violation(format!("no completion after {max_steps} decisions"))
}

fn finish(mut game: Game, name: &str) -> Result<GameResult, AdversaryError> {
    let remaining = game.jobs.len() - game.commitments.len();
    if remaining > 0 {
        return Err(AdversaryError::IncompleteSchedule(remaining));
    }
    game.settle(true);
    let last_start = game.commitments.iter().map(|c| c.start).fold(0.0, f64::max);
    // pigeonhole: 2m(m-1)+1 jobs of length >= 1 on m machines
    assert!(
        last_start >= late_start_threshold(game.m),
        "complete schedule without a late start"
    );
    let (j_prime, case) = game.j_prime.expect("a late start fixes j'");
    let alg_makespan = game
        .ends
        .iter()
        .map(|e| e.expect("all fixed"))
        .fold(0.0, f64::max);
    let opt = opt_makespan(game.m, case);
    // flush reveals that the scheduler never waited for
    game.clock = f64::INFINITY;
    game.publish_reveals();
    Ok(GameResult {
        scheduler: name.to_string(),
        machines: game.m,
        j_prime,
        case,
        alg_makespan,
        opt_makespan: opt,
        ratio: alg_makespan / opt,
        last_start,
        transcript: game.transcript,
    })
}

/// Greedy opponents: commit the lowest uncommitted id to the machine that
/// frees up first (lowest index on ties), waiting for test results when a
/// machine's free time is still unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    TestAllGreedy,
    NeverTestGreedy,
}

impl Baseline {
    pub fn scheduler(self) -> BaselineScheduler {
        BaselineScheduler { kind: self }
    }
}

#[derive(Debug, Clone)]
pub struct BaselineScheduler {
    kind: Baseline,
}

impl OnlineMakespanScheduler for BaselineScheduler {
    fn name(&self) -> &str {
        match self.kind {
            Baseline::TestAllGreedy => "test-all-greedy",
            Baseline::NeverTestGreedy => "never-test-greedy",
        }
    }

    fn decide(&mut self, view: &GameView<'_>) -> Decision {
        let Some(job) = view.jobs.jobs.iter().find(|j| !view.is_committed(j.id)) else {
            return Decision::Done;
        };
        // per machine: Ok(known free time) or Err(earliest possible free time)
        let free: Vec<Result<f64, f64>> = (0..view.machines)
            .map(|mach| {
                let Some(last) = view
                    .commitments
                    .iter()
                    .filter(|c| c.machine == mach)
                    .max_by(|a, b| a.start.total_cmp(&b.start))
                else {
                    return Ok(0.0);
                };
                let info = &view.jobs.jobs[last.job as usize];
                if !last.test {
                    return Ok(last.start + info.upper_limit);
                }
                let test_end = last.start + info.test_time;
                match view.revealed(last.job) {
                    Some(p) => Ok(test_end + p),
                    None => Err(test_end),
                }
            })
            .collect();
        let known = free
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.ok().map(|t| (i, t)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let unknown = free.iter().filter_map(|f| f.err()).reduce(f64::min);
        match (known, unknown) {
            (Some((machine, at)), u) if u.is_none_or(|u| at <= u) => Decision::Commit(Commitment {
                job: job.id,
                machine,
                test: self.kind == Baseline::TestAllGreedy,
                start: at.max(view.clock),
            }),
            (_, Some(u)) => Decision::Wait(u),
            (_, None) => unreachable!("a machine without pending results has a known free time"),
        }
    }
}
