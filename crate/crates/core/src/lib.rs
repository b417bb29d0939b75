//! Analysis and simulation of synchronous periodic task sets with
//! (m,k)-firm constraints under non-preemptive Distance Based Priority
//! (DBP) scheduling.
//!
//! The crate is organized bottom-up:
//!
//! - [`sequence`]: k-sequences, DBP distance and window shifting.
//! - [`task`]: task parameters, task sets and tie-breaking policies.
//! - [`bound`]: hyper-period and state-space counting.
//! - [`sim`]: the deterministic, memoryless DBP simulator and its traces.
//! - [`analysis`]: the exact schedulability test, the brute-force oracle
//!   over the feasibility interval, and period statistics.
//! - [`search`]: exhaustive search over initial k-sequence assignments.
//! - [`document`] and [`render`]: the task-set file format and trace
//!   renderings used by the command-line tool.

pub mod analysis;
pub mod bound;
pub mod document;
mod error;
pub mod render;
pub mod search;
pub mod sequence;
pub mod sim;
pub mod task;

pub use analysis::{exact_test, feasibility_interval, oracle_test, period_statistics, Verdict};
pub use bound::{count_valid_sequences, hyperperiod, state_bound};
pub use error::{Error, Result};
pub use search::{
    search_initial_sequences, InitSearchReport, SearchMode, SearchOptions, SearchSpace,
};
pub use sequence::KSequence;
pub use sim::{resume, simulate, SimulatorState, Trace, TraceEvent};
pub use task::{Task, TaskSet, TieBreak};

/// Discrete time, in integer time units.
pub type Time = u64;
