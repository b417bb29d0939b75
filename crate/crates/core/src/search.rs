//! Exhaustive search over initial k-sequence assignments.
//!
//! Candidates are the cartesian product of per-task sequence lists, each
//! list in lexicographic order of the `'0'`/`'1'` string, with the first
//! task varying slowest. Evaluation may run on several threads; results
//! are always reported in that lexicographic order.

use serde::{Deserialize, Serialize};

use crate::analysis::exact_test;
use crate::bound::interval_length;
use crate::error::{Error, Result};
use crate::sequence::KSequence;
use crate::task::{Task, TaskSet, TieBreak};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// Sequences with at least m met deadlines.
    #[default]
    ValidOnly,
    /// Every length-k bitstring, fictive error states included.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Stop at the lexicographically first feasible assignment.
    First,
    #[default]
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub space: SearchSpace,
    pub mode: SearchMode,
    /// Worker threads; 0 picks the runtime default.
    pub jobs: usize,
    /// Largest number of candidate assignments the search accepts.
    pub max_candidates: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            space: SearchSpace::ValidOnly,
            mode: SearchMode::All,
            jobs: 0,
            max_candidates: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitSearchReport {
    /// Verdict for the all-ones initial sequences.
    pub default_feasible: bool,
    pub feasible_assignments: Vec<Vec<KSequence>>,
    pub total_candidates: u64,
    pub includes_error_states: bool,
}

/// Sequences of `task` in the search space, in lexicographic order. The
/// caller has already checked the list is small enough to materialize.
fn candidates(task: &Task, space: SearchSpace) -> Result<Vec<KSequence>> {
    let min_ones = match space {
        SearchSpace::All => 0,
        SearchSpace::ValidOnly => task.m,
    };
    let mut out = Vec::new();
    extend(&mut out, 0, task.k, 0, min_ones, task.k)?;
    Ok(out)
}

/// Depth-first enumeration, most significant (oldest) bit first, `0`
/// branch before `1`; branches that can no longer reach `min_ones` ones
/// are pruned.
fn extend(
    out: &mut Vec<KSequence>,
    prefix: u64,
    left: u32,
    ones: u32,
    min_ones: u32,
    k: u32,
) -> Result<()> {
    if ones + left < min_ones {
        return Ok(());
    }
    if left == 0 {
        out.push(KSequence::from_bits(prefix, k)?);
        return Ok(());
    }
    extend(out, prefix << 1, left - 1, ones, min_ones, k)?;
    extend(out, prefix << 1 | 1, left - 1, ones + 1, min_ones, k)
}

/// Decodes candidate number `index` into one sequence per task.
fn assignment(lists: &[Vec<KSequence>], mut index: u64) -> Vec<KSequence> {
    let mut out = vec![lists[0][0]; lists.len()];
    for (slot, list) in out.iter_mut().zip(lists).rev() {
        let radix = list.len() as u64;
        *slot = list[(index % radix) as usize];
        index /= radix;
    }
    out
}

/// Runs [`exact_test`] on every candidate initial assignment.
pub fn search_initial_sequences(
    tasks: &[Task],
    tiebreak: TieBreak,
    options: SearchOptions,
) -> Result<InitSearchReport> {
    let base = TaskSet::with_all_met(tasks.to_vec(), tiebreak)?;
    interval_length(&base)?;

    // Lists are built only once the count is known to be acceptable.
    let total = tasks.iter().try_fold(1u128, |acc, t| {
        let per_task: u128 = match options.space {
            SearchSpace::All => 1u128 << t.k,
            SearchSpace::ValidOnly => crate::bound::count_valid_sequences(t.m, t.k)? as u128,
        };
        Ok::<_, Error>(acc.saturating_mul(per_task))
    })?;
    if total > options.max_candidates as u128 {
        return Err(Error::SearchSpaceTooLarge {
            candidates: total,
            limit: options.max_candidates,
        });
    }
    let total = total as u64;
    let lists = tasks
        .iter()
        .map(|t| candidates(t, options.space))
        .collect::<Result<Vec<_>>>()?;

    let default_feasible = exact_test(&base)?.is_feasible();
    let evaluate = |index: u64| -> Result<Option<Vec<KSequence>>> {
        let init = assignment(&lists, index);
        let ts = base.with_initial(init.clone())?;
        Ok(exact_test(&ts)?.is_feasible().then_some(init))
    };
    let feasible_assignments = run(options, total, &evaluate)?;

    Ok(InitSearchReport {
        default_feasible,
        feasible_assignments,
        total_candidates: total,
        includes_error_states: options.space == SearchSpace::All,
    })
}

type Evaluate<'a> = dyn Fn(u64) -> Result<Option<Vec<KSequence>>> + Sync + 'a;

#[cfg(feature = "parallel")]
fn run(options: SearchOptions, total: u64, evaluate: &Evaluate<'_>) -> Result<Vec<Vec<KSequence>>> {
    use rayon::prelude::*;

    let search = || -> Result<Vec<Vec<KSequence>>> {
        let indices = (0..total).into_par_iter();
        match options.mode {
            SearchMode::First => indices
                .map(evaluate)
                .find_first(|r| !matches!(r, Ok(None)))
                .transpose()
                .map(|found| found.flatten().into_iter().collect()),
            SearchMode::All => indices
                .map(evaluate)
                .collect::<Result<Vec<_>>>()
                .map(|found| found.into_iter().flatten().collect()),
        }
    };
    if options.jobs == 0 {
        return search();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| {
            Error::InvalidTaskSet(format!("cannot start {} worker threads: {e}", options.jobs))
        })?
        .install(search)
}

#[cfg(not(feature = "parallel"))]
fn run(options: SearchOptions, total: u64, evaluate: &Evaluate<'_>) -> Result<Vec<Vec<KSequence>>> {
    let mut found = Vec::new();
    for index in 0..total {
        if let Some(init) = evaluate(index)? {
            found.push(init);
            if options.mode == SearchMode::First {
                break;
            }
        }
    }
    Ok(found)
}
