//! Human- and machine-readable renderings of traces and verdicts.

use std::fmt::Write;

use serde::Serialize;

use crate::analysis::{Analysis, Verdict};
use crate::search::InitSearchReport;
use crate::sim::{EventKind, Trace, TraceEvent};
use crate::task::TaskSet;
use crate::Time;

/// Widest trace the Gantt renderer accepts, in time units.
pub const MAX_GANTT_HORIZON: Time = 200;

fn task_name<'a>(ts: &'a TaskSet, event: &TraceEvent) -> Option<&'a str> {
    event.task_index.map(|i| ts.tasks()[i].name.as_str())
}

/// One line per event: `t=<time> <kind> <task> job=<j> seq=<bits> d=<distance>`,
/// with `-` for absent fields.
pub fn trace_text(ts: &TaskSet, trace: &Trace) -> String {
    let mut out = String::new();
    for e in &trace.events {
        let dash = || "-".to_string();
        writeln!(
            out,
            "t={} {} {} job={} seq={} d={}",
            e.time,
            e.kind.as_str(),
            task_name(ts, e).unwrap_or("-"),
            e.job_index.map_or_else(dash, |j| j.to_string()),
            e.sequence_after.map_or_else(dash, |w| w.to_string()),
            e.distance_after.map_or_else(dash, |d| d.to_string()),
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct JsonEvent<'a> {
    time: Time,
    kind: EventKind,
    task: Option<&'a str>,
    job: Option<u64>,
    seq: Option<String>,
    d: Option<u32>,
}

/// JSON array of `{time, kind, task, job, seq, d}` objects.
pub fn trace_json(ts: &TaskSet, trace: &Trace) -> String {
    let events: Vec<_> = trace
        .events
        .iter()
        .map(|e| JsonEvent {
            time: e.time,
            kind: e.kind,
            task: task_name(ts, e),
            job: e.job_index,
            seq: e.sequence_after.map(|w| w.to_string()),
            d: e.distance_after,
        })
        .collect();
    serde_json::to_string_pretty(&events).expect("trace events always serialize")
}

/// ASCII timeline over `[0, horizon)`, one character per time unit and one
/// row per task: `#` executing, `.` not executing, `!` deadline miss,
/// `X` constraint violation. Execution wins over a miss recorded in the
/// same unit; a violation wins over both.
pub fn trace_gantt(ts: &TaskSet, trace: &Trace, horizon: Time) -> String {
    let width = horizon as usize;
    let mut rows = vec![vec![b'.'; width]; ts.len()];
    let mark = |rows: &mut Vec<Vec<u8>>, i: usize, t: Time, c: u8| {
        if let Some(cell) = rows[i].get_mut(t as usize) {
            let rank = |c: u8| match c {
                b'X' => 3,
                b'#' => 2,
                b'!' => 1,
                _ => 0,
            };
            if rank(c) > rank(*cell) {
                *cell = c;
            }
        }
    };
    for x in trace.executions(ts) {
        for t in x.start..x.end.min(horizon) {
            mark(&mut rows, x.task_index, t, b'#');
        }
    }
    for e in &trace.events {
        match (e.kind, e.task_index) {
            (EventKind::Miss, Some(i)) => mark(&mut rows, i, e.time, b'!'),
            (EventKind::Violation, Some(i)) => mark(&mut rows, i, e.time, b'X'),
            _ => {}
        }
    }

    let label = ts.tasks().iter().map(|t| t.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    let axis = |step: Time| -> String {
        (0..horizon)
            .map(|t| char::from(b'0' + ((t / step) % 10) as u8))
            .collect()
    };
    if horizon >= 10 {
        writeln!(out, "{:label$} {}", "", axis(10)).unwrap();
    }
    writeln!(out, "{:label$} {}", "", axis(1)).unwrap();
    for (task, row) in ts.tasks().iter().zip(rows) {
        writeln!(
            out,
            "{:label$} {}",
            task.name,
            String::from_utf8(row).unwrap()
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
enum JsonVerdict<'a> {
    Feasible {
        transient_start: Time,
        period: Time,
        hyperperiod: Time,
        state_bound: u64,
        hyperperiods_simulated: u64,
    },
    Infeasible {
        violation_time: Time,
        violating_task: &'a str,
        violating_sequence: String,
        hyperperiod: Time,
        state_bound: u64,
        hyperperiods_simulated: u64,
    },
}

fn json_verdict<'a>(ts: &'a TaskSet, a: &Analysis) -> JsonVerdict<'a> {
    match a.verdict {
        Verdict::Feasible {
            transient_start,
            period,
        } => JsonVerdict::Feasible {
            transient_start,
            period,
            hyperperiod: a.hyperperiod,
            state_bound: a.state_bound,
            hyperperiods_simulated: a.hyperperiods_simulated,
        },
        Verdict::Infeasible {
            violation_time,
            violating_task,
            violating_sequence,
        } => JsonVerdict::Infeasible {
            violation_time,
            violating_task: &ts.tasks()[violating_task].name,
            violating_sequence: violating_sequence.to_string(),
            hyperperiod: a.hyperperiod,
            state_bound: a.state_bound,
            hyperperiods_simulated: a.hyperperiods_simulated,
        },
    }
}

pub fn analysis_json(ts: &TaskSet, analysis: &Analysis) -> String {
    serde_json::to_string_pretty(&json_verdict(ts, analysis)).expect("verdicts always serialize")
}

pub fn analysis_text(ts: &TaskSet, analysis: &Analysis) -> String {
    let mut out = String::new();
    match analysis.verdict {
        Verdict::Feasible {
            transient_start,
            period,
        } => {
            writeln!(out, "outcome: feasible").unwrap();
            writeln!(out, "transient_start: {transient_start}").unwrap();
            writeln!(
                out,
                "period: {period} ({} x hyper-period)",
                period / analysis.hyperperiod
            )
            .unwrap();
        }
        Verdict::Infeasible {
            violation_time,
            violating_task,
            violating_sequence,
        } => {
            writeln!(out, "outcome: infeasible").unwrap();
            writeln!(out, "violation_time: {violation_time}").unwrap();
            writeln!(out, "violating_task: {}", ts.tasks()[violating_task].name).unwrap();
            writeln!(out, "violating_sequence: {violating_sequence}").unwrap();
        }
    }
    writeln!(out, "hyperperiod: {}", analysis.hyperperiod).unwrap();
    writeln!(out, "state_bound: {}", analysis.state_bound).unwrap();
    writeln!(
        out,
        "hyperperiods_simulated: {}",
        analysis.hyperperiods_simulated
    )
    .unwrap();
    out
}

pub fn bound_text(hyperperiod: Time, state_bound: u64, interval_end: Time) -> String {
    format!("P={hyperperiod}\nmax={state_bound}\ninterval=[0,{interval_end})\n")
}

fn assignment_text(ts: &TaskSet, assignment: &[crate::KSequence]) -> String {
    let parts: Vec<String> = ts
        .tasks()
        .iter()
        .zip(assignment)
        .map(|(t, w)| format!("{}=[{w}]", t.name))
        .collect();
    parts.join(" ")
}

pub fn search_text(ts: &TaskSet, report: &InitSearchReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "all-ones initial sequences: {}",
        if report.default_feasible {
            "feasible"
        } else {
            "infeasible"
        }
    )
    .unwrap();
    writeln!(
        out,
        "candidates: {} ({})",
        report.total_candidates,
        if report.includes_error_states {
            "all sequences"
        } else {
            "valid sequences only"
        }
    )
    .unwrap();
    writeln!(
        out,
        "feasible assignments: {}",
        report.feasible_assignments.len()
    )
    .unwrap();
    for a in &report.feasible_assignments {
        writeln!(out, "  {}", assignment_text(ts, a)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct JsonSearch<'a> {
    default_feasible: bool,
    total_candidates: u64,
    includes_error_states: bool,
    tasks: Vec<&'a str>,
    feasible_assignments: Vec<Vec<String>>,
}

/// Search report as JSON; each assignment lists sequences in task order.
pub fn search_json(ts: &TaskSet, report: &InitSearchReport) -> String {
    let json = JsonSearch {
        default_feasible: report.default_feasible,
        total_candidates: report.total_candidates,
        includes_error_states: report.includes_error_states,
        tasks: ts.tasks().iter().map(|t| t.name.as_str()).collect(),
        feasible_assignments: report
            .feasible_assignments
            .iter()
            .map(|a| a.iter().map(|w| w.to_string()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("reports always serialize")
}
