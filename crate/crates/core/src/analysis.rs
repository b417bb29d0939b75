//! Exact DBP-schedulability test and its brute-force counterpart.
//!
//! A feasible DBP schedule of a synchronous constrained-deadline task set
//! is finally periodic: at every multiple of the hyper-period `P` the
//! state reduces to the tuple of k-sequences, the scheduler is
//! deterministic and memoryless, and there are only [`state_bound`]
//! valid tuples. [`exact_test`] simulates one hyper-period at a time and
//! stops at the first violation or the first recurring tuple. Worst case
//! it simulates `state_bound + 1` hyper-periods, i.e. `O(state_bound * P)`
//! time units; [`oracle_test`] always simulates the whole feasibility
//! interval.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bound::{hyperperiod, interval_length, state_bound};
use crate::error::{Error, Result};
use crate::sequence::KSequence;
use crate::sim::Simulator;
use crate::task::TaskSet;
use crate::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Verdict {
    /// The schedule repeats with `period` from `transient_start` on.
    Feasible { transient_start: Time, period: Time },
    /// First constraint violation of the schedule.
    Infeasible {
        violation_time: Time,
        violating_task: usize,
        violating_sequence: KSequence,
    },
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible { .. })
    }

    pub fn outcome(&self) -> Outcome {
        if self.is_feasible() {
            Outcome::Feasible
        } else {
            Outcome::Infeasible
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Feasible,
    Infeasible,
}

/// Verdict of [`exact_test`] with the quantities it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub verdict: Verdict,
    pub hyperperiod: Time,
    pub state_bound: u64,
    pub hyperperiods_simulated: u64,
}

/// Exact DBP-schedulability test.
///
/// Snapshots are compared against every earlier snapshot, including the
/// initial one, and are kept in a map rather than a window of
/// `state_bound` slots.
pub fn exact_test(ts: &TaskSet) -> Result<Verdict> {
    analyze(ts).map(|a| a.verdict)
}

pub fn analyze(ts: &TaskSet) -> Result<Analysis> {
    let bound = state_bound(ts)?;
    let p = hyperperiod(ts)?;
    interval_length(ts)?;

    let mut sim = Simulator::new(ts).without_trace();
    let mut seen: HashMap<Vec<KSequence>, u64> = HashMap::new();
    seen.insert(sim.state().sequences.clone(), 0);

    // With fictive error-state initials the first snapshot is not one of
    // the `bound` valid states, hence one extra hyper-period at most.
    for j in 1..=bound.saturating_add(1) {
        let end = j.checked_mul(p).ok_or(Error::Overflow("simulated time"))?;
        let finish = |verdict| Analysis {
            verdict,
            hyperperiod: p,
            state_bound: bound,
            hyperperiods_simulated: j,
        };
        if let Some(v) = sim.run_until(end) {
            return Ok(finish(Verdict::Infeasible {
                violation_time: v.time,
                violating_task: v.task_index,
                violating_sequence: v.sequence,
            }));
        }
        let snapshot = sim.state().sequences.clone();
        if let Some(&earlier) = seen.get(&snapshot) {
            return Ok(finish(Verdict::Feasible {
                transient_start: earlier * p,
                period: (j - earlier) * p,
            }));
        }
        seen.insert(snapshot, j);
    }
    unreachable!("more distinct snapshots than valid system states")
}

/// `[0, state_bound * P)`: if no constraint is violated by requests in
/// this interval, none ever is.
pub fn feasibility_interval(ts: &TaskSet) -> Result<Range<Time>> {
    Ok(0..interval_length(ts)?)
}

/// Brute-force test: simulate the whole feasibility interval (one more
/// hyper-period when some initial sequence is a fictive error state).
pub fn oracle_test(ts: &TaskSet) -> Result<Outcome> {
    let mut horizon = feasibility_interval(ts)?.end;
    if ts.has_error_state_initials() {
        horizon = horizon
            .checked_add(hyperperiod(ts)?)
            .ok_or(Error::Overflow("feasibility interval"))?;
    }
    let mut sim = Simulator::new(ts).without_trace();
    Ok(match sim.run_until(horizon) {
        Some(_) => Outcome::Infeasible,
        None => Outcome::Feasible,
    })
}

/// Histograms of `period / P` and `transient_start / P` over feasible
/// analyses; infeasible ones are skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodStatistics {
    pub period_ratios: BTreeMap<u64, usize>,
    pub transient_ratios: BTreeMap<u64, usize>,
}

pub fn period_statistics<'a>(analyses: impl IntoIterator<Item = &'a Analysis>) -> PeriodStatistics {
    let mut stats = PeriodStatistics::default();
    for a in analyses {
        if let Verdict::Feasible {
            transient_start,
            period,
        } = a.verdict
        {
            *stats
                .period_ratios
                .entry(period / a.hyperperiod)
                .or_default() += 1;
            *stats
                .transient_ratios
                .entry(transient_start / a.hyperperiod)
                .or_default() += 1;
        }
    }
    stats
}
