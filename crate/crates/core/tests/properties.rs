use mkdbp::analysis::{analyze, Outcome};
use mkdbp::document::{parse_taskset, render_taskset};
use mkdbp::sim::{EventKind, Simulator};
use mkdbp::{
    exact_test, hyperperiod, oracle_test, resume, simulate, state_bound, KSequence, SimulatorState,
    Task, TaskSet, TieBreak, Verdict,
};
use proptest::prelude::*;

fn task() -> impl Strategy<Value = (Task, KSequence)> {
    (1u64..=12, 1u32..=4)
        .prop_flat_map(|(period, k)| {
            (
                Just(period),
                1..=period.div_ceil(3),
                Just(k),
                1..=k,
                0..1u64 << k,
            )
        })
        .prop_flat_map(|(period, wcet, k, m, bits)| {
            (
                Just(period),
                Just(wcet),
                wcet..=period,
                Just(k),
                Just(m),
                Just(bits),
            )
        })
        .prop_map(|(period, wcet, deadline, k, m, bits)| {
            (
                Task::new("", period, wcet, deadline, m, k),
                KSequence::from_bits(bits, k).unwrap(),
            )
        })
}

fn taskset(valid_initials: bool) -> impl Strategy<Value = TaskSet> {
    (
        prop::collection::vec(task(), 2..=3),
        prop::sample::select(TieBreak::ALL.to_vec()),
    )
        .prop_map(move |(entries, tiebreak)| {
            let (tasks, init): (Vec<_>, Vec<_>) = entries
                .into_iter()
                .enumerate()
                .map(|(i, (mut t, w))| {
                    t.name = format!("t{i}");
                    let w = if valid_initials && w.is_error_state(t.m) {
                        KSequence::all_met(t.k).unwrap()
                    } else {
                        w
                    };
                    (t, w)
                })
                .unzip();
            TaskSet::new(tasks, init, tiebreak).unwrap()
        })
        .prop_filter("feasibility interval within 10^5", |ts| {
            state_bound(ts).unwrap() * hyperperiod(ts).unwrap() <= 100_000
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn schedule_invariants(ts in taskset(false), horizon in 1u64..200) {
        let trace = simulate(&ts, horizon);
        prop_assert_eq!(&trace, &simulate(&ts, horizon));
        let json = serde_json::to_string(&trace).unwrap();
        prop_assert_eq!(json, serde_json::to_string(&simulate(&ts, horizon)).unwrap());

        for w in trace.events.windows(2) {
            prop_assert!(w[0].time <= w[1].time);
        }

        let runs = trace.executions(&ts);
        for x in &runs {
            let task = &ts.tasks()[x.task_index];
            let arrival = x.job_index * task.period;
            prop_assert_eq!(x.end - x.start, task.wcet);
            prop_assert!(arrival <= x.start && x.end <= arrival + task.deadline);
        }
        let mut sorted = runs.clone();
        sorted.sort_by_key(|x| x.start);
        for w in sorted.windows(2) {
            prop_assert!(w[0].end <= w[1].start, "overlap {:?}", w);
        }

        // work conservation: while idle, no waiting job could still finish
        let end = trace.violation().map_or(horizon, |v| v.time);
        for t in 0..end {
            if sorted.iter().any(|x| x.start <= t && t < x.end) {
                continue;
            }
            for (i, task) in ts.tasks().iter().enumerate() {
                let job = t / task.period;
                let arrival = job * task.period;
                let started = runs.iter().any(|x| x.task_index == i && x.job_index == job && x.start <= t);
                prop_assert!(
                    started || t >= arrival + task.deadline || t + task.wcet > arrival + task.deadline,
                    "processor idle at {} while job {} of task {} could run", t, job, i
                );
            }
        }

        // exactly one outcome per job whose deadline falls in the run
        for (i, task) in ts.tasks().iter().enumerate() {
            let mut job = 0;
            while job * task.period + task.deadline <= end {
                let outcomes = trace.events.iter().filter(|e| {
                    e.task_index == Some(i)
                        && e.job_index == Some(job)
                        && matches!(e.kind, EventKind::Completion | EventKind::Miss)
                }).count();
                prop_assert_eq!(outcomes, 1, "task {} job {}", i, job);
                job += 1;
            }
        }

        // window soundness
        if trace.violation().is_none() {
            for e in &trace.events {
                if matches!(e.kind, EventKind::Completion | EventKind::Miss) {
                    let i = e.task_index.unwrap();
                    prop_assert!(!e.sequence_after.unwrap().is_error_state(ts.tasks()[i].m));
                }
            }
        }
    }

    #[test]
    fn exact_test_agrees_with_oracle(ts in taskset(false)) {
        let analysis = analyze(&ts).unwrap();
        prop_assert_eq!(analysis.verdict.outcome(), oracle_test(&ts).unwrap());
        let p = analysis.hyperperiod;
        let bound = analysis.state_bound;
        let fictive = ts.has_error_state_initials();
        prop_assert!(analysis.hyperperiods_simulated <= bound + 1);

        match analysis.verdict {
            Verdict::Feasible { transient_start, period } => {
                prop_assert!(period > 0 && period % p == 0 && transient_start % p == 0);
                let limit = if fictive { (bound + 1) * p } else { bound * p };
                prop_assert!(transient_start + period <= limit);

                // closure: one period from the snapshot ends in the same snapshot
                let mut sim = Simulator::new(&ts).without_trace();
                sim.run_until(transient_start);
                let snapshot = sim.state().sequences.clone();
                let from = SimulatorState::at_release_instant(&ts, transient_start, snapshot.clone()).unwrap();
                let mut again = Simulator::from_state(&ts, from.clone()).unwrap();
                prop_assert!(again.run_until(transient_start + period).is_none());
                prop_assert_eq!(&again.state().sequences, &snapshot);

                // memorylessness: the sequences alone reproduce the schedule
                let original = simulate(&ts, transient_start + period).segment(transient_start, transient_start + period);
                prop_assert_eq!(resume(from, &ts, period).unwrap(), original);

                // snapshots stay valid, except possibly a fictive start
                let mut sim = Simulator::new(&ts).without_trace();
                for j in 1..=(transient_start + period) / p {
                    sim.run_until(j * p);
                    for (t, w) in ts.tasks().iter().zip(&sim.state().sequences) {
                        prop_assert!(!w.is_error_state(t.m));
                    }
                }
            }
            Verdict::Infeasible { violation_time, violating_task, violating_sequence } => {
                prop_assert!(violating_sequence.is_error_state(ts.tasks()[violating_task].m));
                let v = simulate(&ts, violation_time).violation().unwrap();
                prop_assert_eq!((v.time, v.task_index, v.sequence), (violation_time, violating_task, violating_sequence));
                prop_assert!(simulate(&ts, violation_time - 1).violation().is_none());
            }
        }
    }

    #[test]
    fn valid_initials_respect_the_bound(ts in taskset(true)) {
        if let Verdict::Feasible { transient_start, period } = exact_test(&ts).unwrap() {
            prop_assert!(transient_start + period <= state_bound(&ts).unwrap() * hyperperiod(&ts).unwrap());
        }
    }

    #[test]
    fn documents_round_trip(ts in taskset(false)) {
        prop_assert_eq!(parse_taskset(&render_taskset(&ts)).unwrap(), ts);
    }
}

#[test]
fn single_task_always_meets() {
    let ts = TaskSet::with_all_met(vec![Task::implicit("a", 1, 1, 1, 1)], TieBreak::Edf).unwrap();
    assert_eq!(
        exact_test(&ts).unwrap(),
        Verdict::Feasible {
            transient_start: 0,
            period: 1
        }
    );
    assert_eq!(oracle_test(&ts).unwrap(), Outcome::Feasible);
}
