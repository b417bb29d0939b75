//! k-sequences: the sliding window of a task's most recent job outcomes.
//!
//! A k-sequence is printed as a string of `'0'`/`'1'` characters with the
//! oldest outcome leftmost and the most recent rightmost. Internally bit 0
//! (the least significant bit) holds the most recent outcome, so the
//! string form reads as the binary numeral of the stored bits and the
//! lexicographic order of strings equals numeric order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest supported window.
pub const MAX_K: u32 = 64;

/// Fixed-length binary history of job outcomes (`true` = deadline met).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSequence {
    len: u8,
    bits: u64,
}

fn mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl KSequence {
    /// Builds a sequence of length `len` from its numeric value (most
    /// recent outcome in the least significant bit).
    pub fn from_bits(bits: u64, len: u32) -> Result<Self> {
        if len == 0 || len > MAX_K {
            return Err(Error::InvalidSequence(
                format!("{bits:b}"),
                "length must be between 1 and 64",
            ));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::InvalidSequence(
                format!("{bits:b}"),
                "value has bits beyond the window length",
            ));
        }
        Ok(KSequence {
            len: len as u8,
            bits,
        })
    }

    /// `1^k`: every one of the last `k` jobs met its deadline.
    pub fn all_met(len: u32) -> Result<Self> {
        Self::from_bits(mask(len.min(MAX_K)), len)
    }

    /// Builds a sequence from outcomes listed oldest first.
    pub fn from_outcomes(outcomes: &[bool]) -> Result<Self> {
        let bits = outcomes.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self::from_bits(bits, outcomes.len() as u32)
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Outcomes, oldest first.
    pub fn outcomes(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).rev().map(move |i| self.bits >> i & 1 == 1)
    }

    pub fn count_met(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Drops the oldest outcome and appends `met` as the most recent.
    pub fn shift(&self, met: bool) -> Self {
        let bits = if self.len() >= 64 {
            self.bits << 1
        } else {
            (self.bits << 1) & mask(self.len())
        };
        KSequence {
            len: self.len,
            bits: bits | met as u64,
        }
    }

    /// Fewer than `m` met deadlines in the window: the (m,k)-firm
    /// constraint is violated.
    pub fn is_error_state(&self, m: u32) -> bool {
        self.count_met() < m
    }

    /// Number of consecutive future misses that would bring the window
    /// below `m` met deadlines; 0 for an error state.
    ///
    /// If the `m`-th met deadline counted from the most recent end sits
    /// at position `pos` (the most recent bit is position 1), it leaves
    /// the window after `k - pos + 1` shifts.
    pub fn distance(&self, m: u32) -> u32 {
        debug_assert!(m <= self.len());
        if m == 0 {
            // no constraint to violate; never reached for valid tasks
            return self.len() + 1;
        }
        if self.is_error_state(m) {
            return 0;
        }
        let mut rest = self.bits;
        for _ in 1..m {
            rest &= rest - 1;
        }
        let pos = rest.trailing_zeros() + 1;
        self.len() - pos + 1
    }
}

/// DBP distance of `sequence` with respect to an `m`-of-k constraint.
pub fn dbp_distance(sequence: &KSequence, m: u32) -> u32 {
    sequence.distance(m)
}

/// Whether `sequence` holds fewer than `m` met deadlines.
pub fn is_error_state(sequence: &KSequence, m: u32) -> bool {
    sequence.is_error_state(m)
}

/// Window shift: drop the oldest outcome, append `met`.
pub fn shift(sequence: &KSequence, met: bool) -> KSequence {
    sequence.shift(met)
}

impl fmt::Display for KSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.outcomes() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for KSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for KSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let outcomes = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidSequence(s.to_string(), "invalid bit")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_outcomes(&outcomes)
            .map_err(|_| Error::InvalidSequence(s.to_string(), "length must be between 1 and 64"))
    }
}

impl Serialize for KSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> KSequence {
        s.parse().unwrap()
    }

    #[test]
    fn known_distances() {
        assert_eq!(seq("101").distance(2), 1);
        assert_eq!(seq("011").distance(2), 2);
        assert_eq!(seq("1111").distance(2), 3);
        assert_eq!(seq("0010").distance(2), 0);
        assert_eq!(seq("1111").distance(3), 2);
        assert_eq!(seq("1011").distance(3), 1);
        assert_eq!(seq("0101").distance(2), 2);
        assert_eq!(seq("010").distance(1), 2);
        assert_eq!(seq("101").distance(1), 3);
    }

    #[test]
    fn all_ones_distance() {
        for k in 1..=MAX_K {
            for m in 1..=k {
                assert_eq!(KSequence::all_met(k).unwrap().distance(m), k - m + 1);
            }
        }
    }

    #[test]
    fn error_states() {
        assert!(seq("0010").is_error_state(2));
        assert!(!seq("1111").is_error_state(2));
        assert!(!seq("101").is_error_state(2));
    }

    #[test]
    fn shifting() {
        assert_eq!(seq("0101").shift(true), seq("1011"));
        assert_eq!(seq("0101").shift(false), seq("1010"));
        assert_eq!(seq("1").shift(false), seq("0"));
        let wide = KSequence::all_met(64).unwrap().shift(false);
        assert_eq!(wide.len(), 64);
        assert_eq!(wide.count_met(), 63);
    }

    #[test]
    fn string_form() {
        assert_eq!(seq("0010").to_string(), "0010");
        assert_eq!(seq("0010").bits(), 2);
        assert!(matches!(
            "012".parse::<KSequence>(),
            Err(Error::InvalidSequence(_, "invalid bit"))
        ));
        assert!("".parse::<KSequence>().is_err());
        assert!(KSequence::from_bits(4, 2).is_err());
        assert!(seq("0011") < seq("0100"));
        assert_eq!(serde_json::to_string(&seq("0110")).unwrap(), "\"0110\"");
    }
}
