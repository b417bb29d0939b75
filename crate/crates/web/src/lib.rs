//! Browser bindings: simulate, analyze and bound a task-set document
//! pasted into the demo page (`www/index.html`).

use mkdbp::analysis::analyze as exact_analysis;
use mkdbp::document::parse_taskset;
use mkdbp::render::{self, MAX_GANTT_HORIZON};
use mkdbp::{feasibility_interval, hyperperiod, simulate as run_simulation, state_bound};
use wasm_bindgen::prelude::*;

/// Gantt chart followed by the event list, or a diagnostic.
pub fn simulate_document(doc: &str, horizon: u64) -> Result<String, String> {
    if horizon == 0 {
        return Err("horizon must be positive".into());
    }
    if horizon > MAX_GANTT_HORIZON {
        return Err(format!(
            "horizon is limited to {MAX_GANTT_HORIZON} time units"
        ));
    }
    let ts = parse_taskset(doc).map_err(|d| d.to_string())?;
    let trace = run_simulation(&ts, horizon);
    let status = match trace.violation() {
        Some(v) => format!(
            "violation at t={} by {} [{}]",
            v.time,
            ts.tasks()[v.task_index].name,
            v.sequence
        ),
        None => format!("no violation in [0,{horizon})"),
    };
    Ok(format!(
        "{}\n{status}\n\n{}",
        render::trace_gantt(&ts, &trace, horizon),
        render::trace_text(&ts, &trace)
    ))
}

pub fn analyze_document(doc: &str) -> Result<String, String> {
    let ts = parse_taskset(doc).map_err(|d| d.to_string())?;
    let analysis = exact_analysis(&ts).map_err(|e| e.to_string())?;
    Ok(render::analysis_text(&ts, &analysis))
}

pub fn bound_document(doc: &str) -> Result<String, String> {
    let ts = parse_taskset(doc).map_err(|d| d.to_string())?;
    let p = hyperperiod(&ts).map_err(|e| e.to_string())?;
    let max = state_bound(&ts).map_err(|e| e.to_string())?;
    let interval = feasibility_interval(&ts).map_err(|e| e.to_string())?;
    Ok(render::bound_text(p, max, interval.end))
}

#[wasm_bindgen]
pub fn simulate(doc: &str, horizon: u32) -> Result<String, JsValue> {
    simulate_document(doc, horizon as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(doc: &str) -> Result<String, JsValue> {
    analyze_document(doc).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bound(doc: &str) -> Result<String, JsValue> {
    bound_document(doc).map_err(|e| JsValue::from_str(&e))
}
