//! `mkdbp`: schedulability analysis and simulation of (m,k)-firm task sets
//! under Distance Based Priority scheduling.
//!
//! Exit codes: 0 feasible / success, 1 infeasible / violation found,
//! 2 usage, parse or overflow error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mkdbp::analysis::analyze;
use mkdbp::document::parse_taskset;
use mkdbp::render::{self, MAX_GANTT_HORIZON};
use mkdbp::{
    feasibility_interval, hyperperiod, search_initial_sequences, simulate, state_bound, SearchMode,
    SearchOptions, SearchSpace, TaskSet,
};

#[derive(Parser)]
#[command(
    name = "mkdbp",
    version,
    about = "Exact DBP schedulability analysis for (m,k)-firm periodic task sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact schedulability test.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Simulate the DBP schedule over [0, horizon).
    Simulate {
        file: PathBuf,
        #[arg(long)]
        horizon: u64,
        #[arg(long, value_enum, default_value_t = TraceFormat::Text)]
        format: TraceFormat,
    },
    /// Print the hyper-period, the state bound and the feasibility interval.
    Bound { file: PathBuf },
    /// Search initial k-sequence assignments for feasible ones.
    Search {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Space::Valid)]
        space: Space,
        #[arg(long, value_enum, default_value_t = Mode::All)]
        mode: Mode,
        /// Worker threads (0: one per core). Does not affect the output.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = SearchOptions::default().max_candidates)]
        max_candidates: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Text,
    Json,
    Gantt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Valid,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    First,
    All,
}

const FEASIBLE: u8 = 0;
const INFEASIBLE: u8 = 1;
const USAGE: u8 = 2;

/// Diagnostic for stderr; always exits with the usage code.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn load(path: &Path) -> Result<TaskSet, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_taskset(&text).map_err(|d| Failure(format!("{}: {d}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { file, format } => {
            let ts = load(&file)?;
            let analysis = analyze(&ts)?;
            match format {
                Format::Text => print!("{}", render::analysis_text(&ts, &analysis)),
                Format::Json => println!("{}", render::analysis_json(&ts, &analysis)),
            }
            Ok(if analysis.verdict.is_feasible() {
                FEASIBLE
            } else {
                INFEASIBLE
            })
        }
        Command::Simulate {
            file,
            horizon,
            format,
        } => {
            if horizon == 0 {
                return Err(Failure("horizon must be positive".into()));
            }
            if matches!(format, TraceFormat::Gantt) && horizon > MAX_GANTT_HORIZON {
                return Err(Failure(format!(
                    "gantt output is limited to {MAX_GANTT_HORIZON} time units; use --format text or json"
                )));
            }
            let ts = load(&file)?;
            let trace = simulate(&ts, horizon);
            match format {
                TraceFormat::Text => print!("{}", render::trace_text(&ts, &trace)),
                TraceFormat::Json => println!("{}", render::trace_json(&ts, &trace)),
                TraceFormat::Gantt => print!("{}", render::trace_gantt(&ts, &trace, horizon)),
            }
            Ok(if trace.violation().is_some() {
                INFEASIBLE
            } else {
                FEASIBLE
            })
        }
        Command::Bound { file } => {
            let ts = load(&file)?;
            let interval = feasibility_interval(&ts)?;
            print!(
                "{}",
                render::bound_text(hyperperiod(&ts)?, state_bound(&ts)?, interval.end)
            );
            Ok(FEASIBLE)
        }
        Command::Search {
            file,
            space,
            mode,
            jobs,
            max_candidates,
            format,
        } => {
            let ts = load(&file)?;
            let options = SearchOptions {
                space: match space {
                    Space::Valid => SearchSpace::ValidOnly,
                    Space::All => SearchSpace::All,
                },
                mode: match mode {
                    Mode::First => SearchMode::First,
                    Mode::All => SearchMode::All,
                },
                jobs,
                max_candidates,
            };
            let report = search_initial_sequences(ts.tasks(), ts.tiebreak(), options)?;
            match format {
                Format::Text => print!("{}", render::search_text(&ts, &report)),
                Format::Json => println!("{}", render::search_json(&ts, &report)),
            }
            Ok(FEASIBLE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
