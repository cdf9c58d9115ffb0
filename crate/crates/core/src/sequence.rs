//! Materialized sequences and decompositions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::schedule::BinSchedule;

/// How a sequence was constructed, which fixes its monotonicity contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMode {
    /// Greedy least-unreachable construction: terms strictly increase
    /// across the whole sequence.
    Standard,
    /// Whole-bin construction for `pair:g` schedules: terms strictly
    /// increase within a bin, and a bin may begin at the previous bin's
    /// last element.
    Gnary,
}

/// A schedule together with its materialized bins.
///
/// Bin `n` (1-based) holds exactly `b_n` elements. Elements are strictly
/// increasing within each bin; across bins they are strictly increasing in
/// `Standard` mode and non-decreasing in `Gnary` mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    schedule: BinSchedule,
    mode: SequenceMode,
    bins: Vec<Vec<BigUint>>,
}

impl Sequence {
    /// Wrap pre-computed bins, validating every structural invariant
    /// against the schedule.
    pub fn new(schedule: BinSchedule, mode: SequenceMode, bins: Vec<Vec<BigUint>>) -> Result<Self> {
        for (idx, bin) in bins.iter().enumerate() {
            let n = idx + 1;
            let b = schedule.bin_size(n)?;
            if bin.len() as u64 != b {
                return Err(Error::Precondition(format!(
                    "bin {n} holds {} elements, schedule says {b}",
                    bin.len()
                )));
            }
            if bin.first().is_some_and(BigUint::is_zero) {
                return Err(Error::Precondition(format!("bin {n} contains zero")));
            }
            for pair in bin.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(Error::Precondition(format!(
                        "bin {n} is not strictly increasing"
                    )));
                }
            }
            if idx > 0 {
                let prev_last = bins[idx - 1].last().expect("bins are non-empty");
                let first = bin.first().expect("bins are non-empty");
                let ok = match mode {
                    SequenceMode::Standard => prev_last < first,
                    SequenceMode::Gnary => prev_last <= first,
                };
                if !ok {
                    return Err(Error::Precondition(format!(
                        "bin {n} starts below the end of bin {}",
                        n - 1
                    )));
                }
            }
        }
        Ok(Sequence {
            schedule,
            mode,
            bins,
        })
    }

    /// The schedule this sequence materializes.
    pub fn schedule(&self) -> &BinSchedule {
        &self.schedule
    }

    /// Construction mode.
    pub fn mode(&self) -> SequenceMode {
        self.mode
    }

    /// Number of materialized bins.
    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    /// All bins, in order.
    pub fn bins(&self) -> &[Vec<BigUint>] {
        &self.bins
    }

    /// Elements of bin `n` (1-based).
    pub fn bin(&self, n: usize) -> Result<&[BigUint]> {
        if n == 0 || n > self.bins.len() {
            return Err(Error::Precondition(format!(
                "bin {n} is not materialized (have 1..={})",
                self.bins.len()
            )));
        }
        Ok(&self.bins[n - 1])
    }

    /// One element by (1-based bin, 0-based position).
    pub fn element(&self, bin: usize, position: usize) -> Result<&BigUint> {
        let b = self.bin(bin)?;
        b.get(position).ok_or_else(|| {
            Error::Precondition(format!("bin {bin} has no position {position}"))
        })
    }

    /// All terms in reading order.
    pub fn terms(&self) -> impl Iterator<Item = &BigUint> {
        self.bins.iter().flatten()
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, bin) in self.bins.iter().enumerate() {
            if idx > 0 {
                write!(f, " | ")?;
            }
            for (j, e) in bin.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// One legal way to write an integer as a sum of sequence elements.
///
/// `picks` maps a 1-based bin index to the 0-based positions taken from
/// that bin. Bins with empty picks are simply absent. Legality (checked by
/// [`Decomposition::validate`]) requires every present pick to have an
/// allowed size and any two present bins to differ in index by more than
/// the schedule's adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    value: BigUint,
    picks: BTreeMap<usize, BTreeSet<usize>>,
}

impl Decomposition {
    /// Assemble a decomposition claim; use [`validate`](Self::validate) to
    /// check it against a sequence.
    pub fn new(value: BigUint, picks: BTreeMap<usize, BTreeSet<usize>>) -> Self {
        Decomposition { value, picks }
    }

    /// The integer this decomposition represents.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Picked positions per bin.
    pub fn picks(&self) -> &BTreeMap<usize, BTreeSet<usize>> {
        &self.picks
    }

    /// Highest bin with a nonempty pick, if any.
    pub fn top_bin(&self) -> Option<usize> {
        self.picks
            .iter()
            .rev()
            .find(|(_, pos)| !pos.is_empty())
            .map(|(&n, _)| n)
    }

    /// Total number of summands (picked elements over all bins).
    pub fn count_summands(&self) -> u64 {
        self.picks.values().map(|pos| pos.len() as u64).sum()
    }

    /// The picked elements, ascending.
    pub fn summands(&self, seq: &Sequence) -> Result<Vec<BigUint>> {
        let mut out = Vec::new();
        for (&bin, positions) in &self.picks {
            for &p in positions {
                out.push(seq.element(bin, p)?.clone());
            }
        }
        out.sort();
        Ok(out)
    }

    /// Check the decomposition against `seq`: positions exist, every
    /// nonempty pick has an allowed size, picked bins respect adjacency,
    /// and the summands add up to `value`.
    pub fn validate(&self, seq: &Sequence) -> Result<()> {
        let mut total = BigUint::zero();
        let mut prev_bin: Option<usize> = None;
        for (&bin, positions) in &self.picks {
            if positions.is_empty() {
                continue;
            }
            let allowed = seq.schedule().allowed(bin)?;
            if !allowed.contains(positions.len() as u64) {
                return Err(Error::Precondition(format!(
                    "picking {} elements from bin {bin} is not allowed ({allowed})",
                    positions.len()
                )));
            }
            if let Some(prev) = prev_bin {
                if bin - prev <= seq.schedule().adjacency() {
                    return Err(Error::Precondition(format!(
                        "bins {prev} and {bin} are within adjacency {}",
                        seq.schedule().adjacency()
                    )));
                }
            }
            prev_bin = Some(bin);
            for &p in positions {
                total += seq.element(bin, p)?;
            }
        }
        if total != self.value {
            return Err(Error::Precondition(format!(
                "summands add to {total}, claimed {}",
                self.value
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = picks{{", self.value)?;
        let mut first = true;
        for (bin, positions) in &self.picks {
            if positions.is_empty() {
                continue;
            }
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "bin {bin}: ")?;
            for (i, p) in positions.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
        }
        write!(f, "}}")
    }
}
