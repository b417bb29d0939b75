//! Periodic tasks with (m,k)-firm constraints.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{KSequence, MAX_K};
use crate::Time;

/// Static parameters of one periodic task (or message stream).
///
/// The j-th job (counting from 0) arrives at `j * period` and must finish
/// by `j * period + deadline`. At least `m` of any `k` consecutive jobs
/// must meet their deadline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub name: String,
    pub period: Time,
    pub wcet: Time,
    pub deadline: Time,
    pub m: u32,
    pub k: u32,
}

impl Task {
    pub fn new(
        name: impl Into<String>,
        period: Time,
        wcet: Time,
        deadline: Time,
        m: u32,
        k: u32,
    ) -> Self {
        Task {
            name: name.into(),
            period,
            wcet,
            deadline,
            m,
            k,
        }
    }

    /// Implicit-deadline task (`deadline == period`).
    pub fn implicit(name: impl Into<String>, period: Time, wcet: Time, m: u32, k: u32) -> Self {
        Self::new(name, period, wcet, period, m, k)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field, reason: &str| {
            Err(Error::InvalidTask {
                task: self.name.clone(),
                field,
                reason: reason.to_string(),
            })
        };
        if self.name.is_empty() {
            return invalid("name", "name must not be empty");
        }
        if self.period == 0 {
            return invalid("period", "period must be positive");
        }
        if self.wcet == 0 {
            return invalid("wcet", "wcet must be positive");
        }
        if self.deadline == 0 {
            return invalid("deadline", "deadline must be positive");
        }
        if self.wcet > self.deadline {
            return invalid("wcet", "wcet exceeds deadline");
        }
        if self.deadline > self.period {
            return invalid("deadline", "deadline exceeds period");
        }
        if self.k == 0 {
            return invalid("k", "k must be positive");
        }
        if self.k > MAX_K {
            return invalid("k", "k exceeds 64");
        }
        if self.m == 0 {
            return invalid("m", "m must be positive");
        }
        if self.m > self.k {
            return invalid("m", "m exceeds k");
        }
        Ok(())
    }
}

/// Secondary ordering among jobs of equal DBP distance. Every policy falls
/// through to the task index, so the order is strict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Earliest absolute deadline first.
    #[default]
    Edf,
    /// Shortest period first.
    Rm,
    /// Lowest task index first.
    Index,
}

impl TieBreak {
    pub const ALL: [TieBreak; 3] = [TieBreak::Edf, TieBreak::Rm, TieBreak::Index];

    pub fn as_str(self) -> &'static str {
        match self {
            TieBreak::Edf => "edf",
            TieBreak::Rm => "rm",
            TieBreak::Index => "index",
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieBreak {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "edf" => Ok(TieBreak::Edf),
            "rm" => Ok(TieBreak::Rm),
            "index" => Ok(TieBreak::Index),
            other => Err(format!(
                "unknown tiebreak '{other}' (expected edf, rm or index)"
            )),
        }
    }
}

/// An ordered, validated set of tasks together with the initial k-sequence
/// of each task and the tie-breaking policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSet {
    tasks: Vec<Task>,
    initial: Vec<KSequence>,
    tiebreak: TieBreak,
}

impl TaskSet {
    pub fn new(tasks: Vec<Task>, initial: Vec<KSequence>, tiebreak: TieBreak) -> Result<Self> {
        if tasks.is_empty() {
            return Err(Error::InvalidTaskSet(
                "a task set needs at least one task".into(),
            ));
        }
        let mut names = HashSet::new();
        for task in &tasks {
            task.validate()?;
            if !names.insert(task.name.as_str()) {
                return Err(Error::InvalidTask {
                    task: task.name.clone(),
                    field: "name",
                    reason: "duplicate task name".into(),
                });
            }
        }
        if initial.len() != tasks.len() {
            return Err(Error::InvalidTaskSet(format!(
                "{} initial sequences for {} tasks",
                initial.len(),
                tasks.len()
            )));
        }
        for (task, init) in tasks.iter().zip(&initial) {
            if init.len() != task.k {
                return Err(Error::InvalidTask {
                    task: task.name.clone(),
                    field: "init",
                    reason: format!("init length {} differs from k = {}", init.len(), task.k),
                });
            }
        }
        Ok(TaskSet {
            tasks,
            initial,
            tiebreak,
        })
    }

    /// Task set whose initial sequences are all `1^k`.
    pub fn with_all_met(tasks: Vec<Task>, tiebreak: TieBreak) -> Result<Self> {
        for t in &tasks {
            t.validate()?;
        }
        let initial = tasks
            .iter()
            .map(|t| KSequence::all_met(t.k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(tasks, initial, tiebreak)
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn initial_sequences(&self) -> &[KSequence] {
        &self.initial
    }

    pub fn tiebreak(&self) -> TieBreak {
        self.tiebreak
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Same tasks and policy, different initial sequences.
    pub fn with_initial(&self, initial: Vec<KSequence>) -> Result<Self> {
        Self::new(self.tasks.clone(), initial, self.tiebreak)
    }

    pub fn with_tiebreak(&self, tiebreak: TieBreak) -> Self {
        TaskSet {
            tiebreak,
            ..self.clone()
        }
    }

    /// Whether any initial sequence is already an error state.
    pub fn has_error_state_initials(&self) -> bool {
        self.tasks
            .iter()
            .zip(&self.initial)
            .any(|(t, w)| w.is_error_state(t.m))
    }
}
