//! Deterministic, memoryless, non-preemptive DBP simulation.
//!
//! Time advances from one decision instant (job completion, arrival or
//! deadline expiry) to the next. Each instant `t` is processed in two
//! phases:
//!
//! 1. outcome phase: completion of the running job if it finishes at
//!    `t` (outcome `1`), then expiry of every unfinished job whose
//!    absolute deadline is `t` (outcome `0`), in task order. If any of
//!    these shifts produced an error-state sequence a violation is
//!    recorded and the run halts.
//! 2. dispatch phase: arrivals at `t` in task order; then, if the
//!    processor is idle, waiting jobs that can no longer finish by their
//!    deadline are discarded and the eligible job of smallest DBP distance
//!    starts and runs for exactly its wcet.
//!
//! A [`SimulatorState`] sits between the two phases of its `time`: the
//! outcomes of `time` are recorded, its arrivals are not. A run over
//! `[start, end)` therefore covers dispatch phases in `[start, end)` and
//! outcome phases in `(start, end]`, so a run that stops at a multiple of
//! the hyper-period ends with every earlier job's outcome recorded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::KSequence;
use crate::task::{Task, TaskSet, TieBreak};
use crate::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Waiting,
    Running,
    Completed,
    Missed,
    /// Can no longer meet its deadline; never executed, its miss is
    /// recorded when the deadline expires.
    Discarded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Job {
    pub task_index: usize,
    pub job_index: u64,
    pub arrival: Time,
    pub absolute_deadline: Time,
    pub state: JobState,
}

impl Job {
    fn new(task_index: usize, task: &Task, job_index: u64) -> Self {
        let arrival = job_index * task.period;
        Job {
            task_index,
            job_index,
            arrival,
            absolute_deadline: arrival + task.deadline,
            state: JobState::Waiting,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Arrival,
    Start,
    Completion,
    Miss,
    Violation,
    Idle,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Arrival => "arrival",
            EventKind::Start => "start",
            EventKind::Completion => "completion",
            EventKind::Miss => "miss",
            EventKind::Violation => "violation",
            EventKind::Idle => "idle",
        }
    }

    /// Whether the event belongs to the outcome phase of its instant.
    pub fn is_outcome(self) -> bool {
        matches!(
            self,
            EventKind::Completion | EventKind::Miss | EventKind::Violation
        )
    }
}

/// One scheduling event. Task-related events carry the task's k-sequence
/// and DBP distance: after the shift for completions and misses, the
/// current values otherwise. Idle events carry no task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceEvent {
    pub time: Time,
    pub kind: EventKind,
    pub task_index: Option<usize>,
    pub job_index: Option<u64>,
    pub sequence_after: Option<KSequence>,
    pub distance_after: Option<u32>,
}

/// Execution interval `[start, end)` of one job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Execution {
    pub task_index: usize,
    pub job_index: u64,
    pub start: Time,
    pub end: Time,
}

/// A shift that left a task's window with fewer than m met deadlines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub time: Time,
    pub task_index: usize,
    pub sequence: KSequence,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// First violation event, if the run ended in one.
    pub fn violation(&self) -> Option<Violation> {
        self.events
            .iter()
            .find(|e| e.kind == EventKind::Violation)
            .map(|e| Violation {
                time: e.time,
                task_index: e.task_index.expect("violation events name a task"),
                sequence: e.sequence_after.expect("violation events carry a sequence"),
            })
    }

    pub fn executions(&self, ts: &TaskSet) -> Vec<Execution> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::Start)
            .map(|e| {
                let task_index = e.task_index.expect("start events name a task");
                Execution {
                    task_index,
                    job_index: e.job_index.expect("start events name a job"),
                    start: e.time,
                    end: e.time + ts.tasks()[task_index].wcet,
                }
            })
            .collect()
    }

    /// Events a run over `[from, to)` produces: dispatch-phase events at
    /// instants in `[from, to)` and outcome-phase events in `(from, to]`.
    pub fn segment(&self, from: Time, to: Time) -> Trace {
        let events = self
            .events
            .iter()
            .filter(|e| {
                if e.kind.is_outcome() {
                    from < e.time && e.time <= to
                } else {
                    from <= e.time && e.time < to
                }
            })
            .copied()
            .collect();
        Trace { events }
    }
}

/// Job picked for execution at the current instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunningJob {
    pub task_index: usize,
    pub finish: Time,
}

/// Everything the scheduler's future depends on: the k-sequence of each
/// task, the job each task currently has outstanding (from which the time
/// elapsed since its last request follows), and the non-preemptible job
/// in flight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimulatorState {
    /// Instant whose outcome phase is done and dispatch phase pending.
    pub time: Time,
    pub sequences: Vec<KSequence>,
    /// Outstanding (not yet resolved) job per task.
    pub jobs: Vec<Option<Job>>,
    pub running: Option<RunningJob>,
    /// The processor is idle and an idle event was already emitted.
    pub idle: bool,
}

impl SimulatorState {
    pub fn initial(ts: &TaskSet) -> Self {
        SimulatorState {
            time: 0,
            sequences: ts.initial_sequences().to_vec(),
            jobs: vec![None; ts.len()],
            running: None,
            idle: false,
        }
    }

    /// State at an instant where every task releases a job (a multiple of
    /// the hyper-period). There, every earlier job has been resolved and
    /// the processor is idle, so the k-sequences are the whole state.
    pub fn at_release_instant(ts: &TaskSet, time: Time, sequences: Vec<KSequence>) -> Result<Self> {
        if let Some(t) = ts.tasks().iter().find(|t| !time.is_multiple_of(t.period)) {
            return Err(Error::InvalidSnapshot(format!(
                "time {time} is not a release instant of task '{}'",
                t.name
            )));
        }
        let state = SimulatorState {
            time,
            sequences,
            jobs: vec![None; ts.len()],
            running: None,
            idle: false,
        };
        state.validate(ts)?;
        Ok(state)
    }

    /// Time elapsed since the last request of task `i` (the request at
    /// `time` itself is not yet released).
    pub fn elapsed_since_request(&self, ts: &TaskSet, i: usize) -> Time {
        let period = ts.tasks()[i].period;
        match self.time % period {
            0 if self.time > 0 => period,
            r => r,
        }
    }

    pub fn validate(&self, ts: &TaskSet) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSnapshot(msg));
        let n = ts.len();
        if self.sequences.len() != n || self.jobs.len() != n {
            return bad(format!(
                "state describes {} tasks, task set has {n}",
                self.sequences.len()
            ));
        }
        for (i, (task, seq)) in ts.tasks().iter().zip(&self.sequences).enumerate() {
            if seq.len() != task.k {
                return bad(format!(
                    "sequence {seq} of task '{}' has length {}, k = {}",
                    task.name,
                    seq.len(),
                    task.k
                ));
            }
            if let Some(job) = &self.jobs[i] {
                let expected_index = (self.time.saturating_sub(1)) / task.period;
                if self.time == 0
                    || job.task_index != i
                    || job.job_index != expected_index
                    || *job
                        != (Job {
                            state: job.state,
                            ..Job::new(i, task, expected_index)
                        })
                    || job.absolute_deadline <= self.time
                {
                    return bad(format!(
                        "job {job:?} of task '{}' is not outstanding at {}",
                        task.name, self.time
                    ));
                }
                let is_running = self.running.map(|r| r.task_index) == Some(i);
                match job.state {
                    JobState::Running if !is_running => {
                        return bad(format!(
                            "job of task '{}' marked running but not in flight",
                            task.name
                        ))
                    }
                    JobState::Waiting | JobState::Discarded if is_running => {
                        return bad(format!(
                            "job of task '{}' in flight but not marked running",
                            task.name
                        ))
                    }
                    JobState::Completed | JobState::Missed => {
                        return bad(format!(
                            "resolved job of task '{}' still outstanding",
                            task.name
                        ))
                    }
                    _ => {}
                }
            }
        }
        if let Some(r) = self.running {
            let Some(job) = self.jobs.get(r.task_index).copied().flatten() else {
                return bad(format!(
                    "running task {} has no outstanding job",
                    r.task_index
                ));
            };
            let wcet = ts.tasks()[r.task_index].wcet;
            let started = r.finish.checked_sub(wcet);
            if r.finish <= self.time
                || r.finish > job.absolute_deadline
                || started.is_none_or(|s| s < job.arrival || s >= self.time)
            {
                return bad(format!(
                    "running job finishing at {} is inconsistent with time {}",
                    r.finish, self.time
                ));
            }
            if self.idle {
                return bad("processor marked idle while a job runs".into());
            }
        }
        Ok(())
    }
}

/// DBP choice among eligible jobs: smallest distance first, then the
/// tie-breaking policy, then the task index.
pub fn choose_next<'a>(
    eligible: impl IntoIterator<Item = &'a Job>,
    sequences: &[KSequence],
    tasks: &[Task],
    tiebreak: TieBreak,
) -> Option<&'a Job> {
    eligible.into_iter().min_by_key(|job| {
        let task = &tasks[job.task_index];
        let distance = sequences[job.task_index].distance(task.m);
        let secondary = match tiebreak {
            TieBreak::Edf => job.absolute_deadline,
            TieBreak::Rm => task.period,
            TieBreak::Index => 0,
        };
        (distance, secondary, job.task_index)
    })
}

/// Step-wise simulator over a borrowed task set.
pub struct Simulator<'a> {
    ts: &'a TaskSet,
    state: SimulatorState,
    events: Option<Vec<TraceEvent>>,
    violation: Option<Violation>,
}

impl<'a> Simulator<'a> {
    pub fn new(ts: &'a TaskSet) -> Self {
        Simulator {
            ts,
            state: SimulatorState::initial(ts),
            events: Some(Vec::new()),
            violation: None,
        }
    }

    pub fn from_state(ts: &'a TaskSet, state: SimulatorState) -> Result<Self> {
        state.validate(ts)?;
        Ok(Simulator {
            ts,
            state,
            events: Some(Vec::new()),
            violation: None,
        })
    }

    /// Disables event recording; violations are still detected.
    pub fn without_trace(mut self) -> Self {
        self.events = None;
        self
    }

    pub fn state(&self) -> &SimulatorState {
        &self.state
    }

    pub fn violation(&self) -> Option<Violation> {
        self.violation
    }

    pub fn into_trace(self) -> Trace {
        Trace {
            events: self.events.unwrap_or_default(),
        }
    }

    /// Runs until instant `end` (outcome phase included) or the first
    /// violation, whichever comes first.
    pub fn run_until(&mut self, end: Time) -> Option<Violation> {
        while self.violation.is_none() && self.state.time < end {
            let now = self.state.time;
            self.dispatch(now);
            let next = self.next_instant(now).min(end);
            self.state.time = next;
            self.record_outcomes(next);
        }
        self.violation
    }

    fn emit(
        &mut self,
        time: Time,
        kind: EventKind,
        task_index: Option<usize>,
        job_index: Option<u64>,
    ) {
        if let Some(events) = &mut self.events {
            let (sequence_after, distance_after) = match task_index {
                Some(i) => {
                    let seq = self.state.sequences[i];
                    (Some(seq), Some(seq.distance(self.ts.tasks()[i].m)))
                }
                None => (None, None),
            };
            events.push(TraceEvent {
                time,
                kind,
                task_index,
                job_index,
                sequence_after,
                distance_after,
            });
        }
    }

    fn next_instant(&self, now: Time) -> Time {
        let tasks = self.ts.tasks();
        let arrivals = tasks
            .iter()
            .map(|t| (now / t.period + 1).saturating_mul(t.period));
        let deadlines = self
            .state
            .jobs
            .iter()
            .flatten()
            .map(|j| j.absolute_deadline)
            .filter(|&d| d > now);
        let finish = self.state.running.map(|r| r.finish);
        arrivals
            .chain(deadlines)
            .chain(finish)
            .min()
            .expect("a task set has at least one task")
    }

    fn record_outcomes(&mut self, now: Time) {
        let mut broken = Vec::new();
        if let Some(r) = self.state.running.filter(|r| r.finish == now) {
            let i = r.task_index;
            let job = self.state.jobs[i]
                .take()
                .expect("running job is outstanding");
            self.state.running = None;
            self.state.sequences[i] = self.state.sequences[i].shift(true);
            self.emit(now, EventKind::Completion, Some(i), Some(job.job_index));
            if self.state.sequences[i].is_error_state(self.ts.tasks()[i].m) {
                broken.push(i);
            }
        }
        for i in 0..self.ts.len() {
            let Some(job) = self.state.jobs[i].filter(|j| j.absolute_deadline == now) else {
                continue;
            };
            self.state.jobs[i] = None;
            self.state.sequences[i] = self.state.sequences[i].shift(false);
            self.emit(now, EventKind::Miss, Some(i), Some(job.job_index));
            if self.state.sequences[i].is_error_state(self.ts.tasks()[i].m) {
                broken.push(i);
            }
        }
        for &i in &broken {
            self.emit(now, EventKind::Violation, Some(i), None);
        }
        if let Some(&i) = broken.first() {
            self.violation = Some(Violation {
                time: now,
                task_index: i,
                sequence: self.state.sequences[i],
            });
        }
    }

    fn dispatch(&mut self, now: Time) {
        let tasks = self.ts.tasks();
        for (i, task) in tasks.iter().enumerate() {
            if now.is_multiple_of(task.period) {
                debug_assert!(
                    self.state.jobs[i].is_none(),
                    "constrained deadlines resolve a job before the next arrival"
                );
                let job = Job::new(i, task, now / task.period);
                self.state.jobs[i] = Some(job);
                self.emit(now, EventKind::Arrival, Some(i), Some(job.job_index));
            }
        }
        if self.state.running.is_some() {
            return;
        }
        for job in self.state.jobs.iter_mut().flatten() {
            if job.state == JobState::Waiting
                && now + tasks[job.task_index].wcet > job.absolute_deadline
            {
                job.state = JobState::Discarded;
            }
        }
        let picked = choose_next(
            self.state
                .jobs
                .iter()
                .flatten()
                .filter(|j| j.state == JobState::Waiting),
            &self.state.sequences,
            tasks,
            self.ts.tiebreak(),
        )
        .copied();
        match picked {
            Some(job) => {
                let i = job.task_index;
                self.state.jobs[i] = Some(Job {
                    state: JobState::Running,
                    ..job
                });
                self.state.running = Some(RunningJob {
                    task_index: i,
                    finish: now + tasks[i].wcet,
                });
                self.state.idle = false;
                self.emit(now, EventKind::Start, Some(i), Some(job.job_index));
            }
            None if !self.state.idle => {
                self.state.idle = true;
                self.emit(now, EventKind::Idle, None, None);
            }
            None => {}
        }
    }
}

/// The DBP schedule of `ts` over `[0, horizon)`, stopping at the first
/// violation.
pub fn simulate(ts: &TaskSet, horizon: Time) -> Trace {
    let mut sim = Simulator::new(ts);
    sim.run_until(horizon);
    sim.into_trace()
}

/// Continues a run from a snapshot for `horizon` time units.
pub fn resume(state: SimulatorState, ts: &TaskSet, horizon: Time) -> Result<Trace> {
    let end = state
        .time
        .checked_add(horizon)
        .ok_or(Error::Overflow("resume horizon"))?;
    let mut sim = Simulator::from_state(ts, state)?;
    sim.run_until(end);
    Ok(sim.into_trace())
}
