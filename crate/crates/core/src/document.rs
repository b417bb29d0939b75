//! Task-set documents: the JSON file format read by the command-line tool.
//!
//! ```json
//! {
//!   "tiebreak": "edf",
//!   "tasks": [
//!     { "name": "tau1", "period": 4, "wcet": 1, "m": 2, "k": 4, "init": "0101" },
//!     { "name": "tau2", "period": 10, "wcet": 8, "deadline": 10, "m": 3, "k": 4 }
//!   ]
//! }
//! ```
//!
//! `deadline` defaults to `period`, `init` to all ones and `tiebreak` to
//! `edf`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::sequence::KSequence;
use crate::task::{Task, TaskSet, TieBreak};
use crate::Time;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSetDocument {
    pub tasks: Vec<TaskEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiebreak: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub name: String,
    pub period: Time,
    pub wcet: Time,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<Time>,
    pub m: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
}

/// Why a document was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// Malformed JSON or a field of the wrong type.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed document describing an invalid task set.
    Invalid {
        task: Option<String>,
        field: String,
        message: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Syntax {
                line,
                column,
                message,
            } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            Diagnostic::Invalid {
                task: Some(task),
                field,
                message,
            } => write!(f, "task '{task}' field '{field}': {message}"),
            Diagnostic::Invalid {
                task: None,
                field,
                message,
            } => {
                write!(f, "field '{field}': {message}")
            }
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Parses and validates a task-set document.
pub fn parse_taskset(text: &str) -> Result<TaskSet, Diagnostic> {
    let doc: TaskSetDocument = serde_json::from_str(text).map_err(|e| Diagnostic::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_taskset()
}

impl TaskSetDocument {
    pub fn to_taskset(&self) -> Result<TaskSet, Diagnostic> {
        let tiebreak = match &self.tiebreak {
            None => TieBreak::default(),
            Some(s) => s.parse().map_err(|message| Diagnostic::Invalid {
                task: None,
                field: "tiebreak".into(),
                message,
            })?,
        };
        if self.tasks.is_empty() {
            return Err(Diagnostic::Invalid {
                task: None,
                field: "tasks".into(),
                message: "at least one task is required".into(),
            });
        }
        let mut tasks = Vec::with_capacity(self.tasks.len());
        let mut initial = Vec::with_capacity(self.tasks.len());
        for entry in &self.tasks {
            let task = Task::new(
                entry.name.clone(),
                entry.period,
                entry.wcet,
                entry.deadline.unwrap_or(entry.period),
                entry.m,
                entry.k,
            );
            task.validate().map_err(diagnostic)?;
            let init = match &entry.init {
                None => KSequence::all_met(task.k).map_err(diagnostic)?,
                Some(s) => {
                    let invalid = |message: &str| Diagnostic::Invalid {
                        task: Some(task.name.clone()),
                        field: "init".into(),
                        message: message.into(),
                    };
                    if s.chars().any(|c| c != '0' && c != '1') {
                        return Err(invalid(&format!("invalid bit in '{s}'")));
                    }
                    if s.len() != task.k as usize {
                        return Err(invalid(&format!(
                            "length {} differs from k = {}",
                            s.len(),
                            task.k
                        )));
                    }
                    s.parse().map_err(diagnostic)?
                }
            };
            tasks.push(task);
            initial.push(init);
        }
        TaskSet::new(tasks, initial, tiebreak).map_err(diagnostic)
    }

    /// Canonical document for `ts`: every field written explicitly.
    pub fn from_taskset(ts: &TaskSet) -> Self {
        TaskSetDocument {
            tasks: ts
                .tasks()
                .iter()
                .zip(ts.initial_sequences())
                .map(|(t, w)| TaskEntry {
                    name: t.name.clone(),
                    period: t.period,
                    wcet: t.wcet,
                    deadline: Some(t.deadline),
                    m: t.m,
                    k: t.k,
                    init: Some(w.to_string()),
                })
                .collect(),
            tiebreak: Some(ts.tiebreak().to_string()),
        }
    }
}

/// Canonical JSON text for `ts`.
pub fn render_taskset(ts: &TaskSet) -> String {
    serde_json::to_string_pretty(&TaskSetDocument::from_taskset(ts))
        .expect("documents always serialize")
}

fn diagnostic(e: Error) -> Diagnostic {
    match e {
        Error::InvalidTask {
            task,
            field,
            reason,
        } => Diagnostic::Invalid {
            task: Some(task),
            field: field.into(),
            message: reason,
        },
        other => Diagnostic::Invalid {
            task: None,
            field: "tasks".into(),
            message: other.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TASKS: &str = r#"{
        "tasks": [
            { "name": "tau1", "period": 4, "wcet": 1, "m": 2, "k": 4 },
            { "name": "tau2", "period": 10, "wcet": 8, "m": 3, "k": 4 }
        ]
    }"#;

    #[test]
    fn defaults() {
        let ts = parse_taskset(TWO_TASKS).unwrap();
        assert_eq!(ts.tasks()[0], Task::new("tau1", 4, 1, 4, 2, 4));
        assert_eq!(ts.tasks()[1], Task::new("tau2", 10, 8, 10, 3, 4));
        assert_eq!(ts.tiebreak(), TieBreak::Edf);
        assert!(ts
            .initial_sequences()
            .iter()
            .all(|w| w.to_string() == "1111"));
    }

    fn invalid(text: &str) -> (Option<String>, String, String) {
        match parse_taskset(text) {
            Err(Diagnostic::Invalid {
                task,
                field,
                message,
            }) => (task, field, message),
            other => panic!("expected a semantic diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn semantic_diagnostics() {
        let (task, field, message) =
            invalid(r#"{"tasks":[{"name":"a","period":4,"wcet":1,"m":5,"k":4}]}"#);
        assert_eq!((task.as_deref(), field.as_str()), (Some("a"), "m"));
        assert!(message.contains("m exceeds k"));

        let (_, field, message) =
            invalid(r#"{"tasks":[{"name":"a","period":4,"wcet":1,"m":1,"k":3,"init":"012"}]}"#);
        assert_eq!(field, "init");
        assert!(message.contains("invalid bit"));

        let (_, field, _) =
            invalid(r#"{"tasks":[{"name":"a","period":4,"wcet":1,"m":1,"k":3,"init":"0101"}]}"#);
        assert_eq!(field, "init");

        let (_, field, _) =
            invalid(r#"{"tasks":[{"name":"a","period":4,"wcet":1,"deadline":5,"m":1,"k":3}]}"#);
        assert_eq!(field, "deadline");

        let (task, field, _) = invalid(
            r#"{"tasks":[{"name":"a","period":4,"wcet":1,"m":1,"k":3}],"tiebreak":"fifo"}"#,
        );
        assert_eq!((task, field.as_str()), (None, "tiebreak"));

        let (_, field, _) = invalid(r#"{"tasks":[]}"#);
        assert_eq!(field, "tasks");
    }

    #[test]
    fn syntax_diagnostics_carry_position() {
        match parse_taskset("{\n  \"tasks\": [\n    { \"name\": \"a\", \"period\": -4 }\n  ]\n}") {
            Err(Diagnostic::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_taskset(
                r#"{"tasks":[{"name":"a","period":4,"wcet":1,"m":1,"k":1,"colour":"red"}]}"#
            ),
            Err(Diagnostic::Syntax { .. })
        ));
        assert!(matches!(
            parse_taskset(r#"{"tasks":[{"name":"a","period":4,"m":1,"k":1}]}"#),
            Err(Diagnostic::Syntax { message, .. }) if message.contains("wcet")
        ));
    }
}
