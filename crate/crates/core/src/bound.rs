//! Hyper-period and state-space counting.
//!
//! At every multiple of the hyper-period all tasks release a job together
//! and every earlier job has already produced its outcome, so the whole
//! scheduler state at those instants is the tuple of k-sequences. Counting
//! the tuples that respect every constraint bounds how many hyper-periods
//! a feasible schedule can run before a state recurs.

use crate::error::{Error, Result};
use crate::task::TaskSet;
use crate::Time;

/// Binomial coefficients `C(k, 0..=k)`, or `None` on overflow.
fn binomial_row(k: u32) -> Option<Vec<u64>> {
    let mut row = vec![1u64];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        for w in row.windows(2) {
            next.push(w[0].checked_add(w[1])?);
        }
        next.push(1);
        row = next;
    }
    Some(row)
}

/// Number of length-`k` binary strings with at least `m` ones:
/// `sum_{j=m}^{k} C(k, j)`.
pub fn count_valid_sequences(m: u32, k: u32) -> Result<u64> {
    if m == 0 || m > k {
        return Err(Error::InvalidTaskSet(format!(
            "need 1 <= m <= k, got m = {m}, k = {k}"
        )));
    }
    let overflow = Error::Overflow("number of valid k-sequences");
    let row = binomial_row(k).ok_or(overflow.clone())?;
    row[m as usize..]
        .iter()
        .try_fold(0u64, |acc, &c| acc.checked_add(c))
        .ok_or(overflow)
}

/// Product over all tasks of [`count_valid_sequences`]: the number of
/// distinct valid system states at hyper-period boundaries.
pub fn state_bound(ts: &TaskSet) -> Result<u64> {
    ts.tasks().iter().try_fold(1u64, |acc, t| {
        acc.checked_mul(count_valid_sequences(t.m, t.k)?)
            .ok_or(Error::Overflow("state bound"))
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple of all task periods.
pub fn hyperperiod(ts: &TaskSet) -> Result<Time> {
    ts.tasks().iter().try_fold(1u64, |acc, t| {
        (acc / gcd(acc, t.period))
            .checked_mul(t.period)
            .ok_or(Error::Overflow("hyper-period"))
    })
}

/// `state_bound * hyperperiod`, the length of the feasibility interval.
pub(crate) fn interval_length(ts: &TaskSet) -> Result<Time> {
    state_bound(ts)?
        .checked_mul(hyperperiod(ts)?)
        .ok_or(Error::Overflow("feasibility interval"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{Task, TieBreak};

    #[test]
    fn small_counts() {
        assert_eq!(count_valid_sequences(1, 1), Ok(1));
        assert_eq!(count_valid_sequences(2, 4), Ok(11));
        assert_eq!(count_valid_sequences(3, 4), Ok(5));
        assert!(count_valid_sequences(0, 4).is_err());
        assert!(count_valid_sequences(5, 4).is_err());
    }

    #[test]
    fn wide_windows() {
        assert_eq!(count_valid_sequences(1, 64), Ok(u64::MAX));
        assert_eq!(count_valid_sequences(64, 64), Ok(1));
        assert_eq!(count_valid_sequences(1, 30), Ok((1 << 30) - 1));
    }

    #[test]
    fn overflowing_product() {
        let tasks = vec![
            Task::implicit("a", 2, 1, 1, 64),
            Task::implicit("b", 2, 1, 1, 64),
        ];
        let ts = TaskSet::with_all_met(tasks, TieBreak::Edf).unwrap();
        assert_eq!(state_bound(&ts), Err(Error::Overflow("state bound")));
    }

    #[test]
    fn lcm_of_periods() {
        let ts = TaskSet::with_all_met(
            vec![
                Task::implicit("a", 4, 1, 2, 4),
                Task::implicit("b", 10, 8, 3, 4),
            ],
            TieBreak::Edf,
        )
        .unwrap();
        assert_eq!(hyperperiod(&ts), Ok(20));

        let big = |name: &str, p| Task::implicit(name, p, 1, 1, 1);
        let ts = TaskSet::with_all_met(
            vec![
                big("a", (1 << 40) + 1),
                big("b", (1 << 40) - 1),
                big("c", 1 << 30),
            ],
            TieBreak::Edf,
        )
        .unwrap();
        assert_eq!(hyperperiod(&ts), Err(Error::Overflow("hyper-period")));
    }
}
