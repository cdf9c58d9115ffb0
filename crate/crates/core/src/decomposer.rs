//! Search for legal decompositions of a target integer.
//!
//! The search walks bins from the highest down. At each bin it tries every
//! legal pick whose sum fits in the remainder — heavier picks first — then
//! the empty pick, and jumps past the adjacency window after a nonempty
//! pick. A branch dies as soon as the remainder exceeds the largest sum
//! the remaining bins can reach, which keeps the walk tractable at the
//! scales this crate targets.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::constructor::omegas;
use crate::error::{Error, Result};
use crate::sequence::{Decomposition, Sequence};

/// Default enumeration limit; truncation is reported, never silent.
pub const DEFAULT_ENUM_LIMIT: usize = 1000;

/// Ceiling on precomputed picks per bin (all allowed-size subsets).
const MAX_BIN_CANDIDATES: usize = 1 << 18;

/// One legal nonempty pick from a single bin.
struct Candidate {
    sum: BigUint,
    /// Ascending element positions.
    positions: Vec<usize>,
    /// Positions sorted descending; the tie-break key after sum.
    order_key: Vec<usize>,
}

/// The result of enumerating decompositions of one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSet {
    target: BigUint,
    found: Vec<Decomposition>,
    truncated: bool,
}

impl DecompositionSet {
    /// The integer that was decomposed.
    pub fn target(&self) -> &BigUint {
        &self.target
    }

    /// All decompositions found, in canonical order: highest used bin
    /// first, then heavier top-bin picks first, recursively.
    pub fn found(&self) -> &[Decomposition] {
        &self.found
    }

    /// True when the search stopped at the enumeration limit; further
    /// decompositions may or may not exist.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.found.len()
    }

    pub fn is_empty(&self) -> bool {
        self.found.is_empty()
    }
}

/// Reusable decomposition searcher over one materialized sequence.
///
/// Construction precomputes every bin's legal picks and the per-prefix
/// reachability bounds, so one `Decomposer` can serve many targets — the
/// range scans in the statistics and verification code rely on this.
pub struct Decomposer<'a> {
    seq: &'a Sequence,
    adjacency: usize,
    /// omega[n]: largest sum reachable from bins 1..=n.
    omega: Vec<BigUint>,
    /// candidates[n-1]: bin n's picks, heaviest first.
    candidates: Vec<Vec<Candidate>>,
}

impl<'a> Decomposer<'a> {
    pub fn new(seq: &'a Sequence) -> Result<Self> {
        let mut candidates = Vec::with_capacity(seq.num_bins());
        for n in 1..=seq.num_bins() {
            let bin = seq.bin(n)?;
            let allowed = seq.schedule().allowed(n)?;
            let mut picks: Vec<Candidate> = Vec::new();
            for &count in allowed.counts() {
                if count == 0 {
                    continue;
                }
                for positions in (0..bin.len()).combinations(count as usize) {
                    let sum = positions.iter().map(|&p| &bin[p]).sum();
                    let order_key: Vec<usize> = positions.iter().rev().copied().collect();
                    picks.push(Candidate {
                        sum,
                        positions,
                        order_key,
                    });
                    if picks.len() > MAX_BIN_CANDIDATES {
                        return Err(Error::EnumerationCap(format!(
                            "bin {n} admits more than {MAX_BIN_CANDIDATES} distinct picks"
                        )));
                    }
                }
            }
            picks.sort_by(|a, b| b.sum.cmp(&a.sum).then(b.order_key.cmp(&a.order_key)));
            candidates.push(picks);
        }
        Ok(Decomposer {
            seq,
            adjacency: seq.schedule().adjacency(),
            omega: omegas(seq)?,
            candidates,
        })
    }

    /// The sequence this searcher operates on.
    pub fn sequence(&self) -> &'a Sequence {
        self.seq
    }

    /// First decomposition of `x` in canonical order, if any exists.
    pub fn decompose(&self, x: &BigUint) -> Result<Option<Decomposition>> {
        let set = self.enumerate(x, 1)?;
        Ok(set.found.into_iter().next())
    }

    /// Up to `limit` decompositions of `x`, canonically ordered.
    pub fn enumerate(&self, x: &BigUint, limit: usize) -> Result<DecompositionSet> {
        if x.is_zero() {
            return Err(Error::Precondition("target must be positive".into()));
        }
        if limit == 0 {
            return Err(Error::Precondition(
                "enumeration limit must be positive".into(),
            ));
        }
        let mut found = Vec::new();
        let mut picks = BTreeMap::new();
        self.search(self.seq.num_bins(), x, &mut picks, &mut found, limit, x);
        let truncated = found.len() == limit;
        Ok(DecompositionSet {
            target: x.clone(),
            found,
            truncated,
        })
    }

    fn search(
        &self,
        highest: usize,
        remainder: &BigUint,
        picks: &mut BTreeMap<usize, BTreeSet<usize>>,
        found: &mut Vec<Decomposition>,
        limit: usize,
        target: &BigUint,
    ) {
        if found.len() == limit {
            return;
        }
        if remainder.is_zero() {
            found.push(Decomposition::new(target.clone(), picks.clone()));
            return;
        }
        if highest == 0 || *remainder > self.omega[highest] {
            return;
        }
        for candidate in &self.candidates[highest - 1] {
            if candidate.sum > *remainder {
                continue;
            }
            picks.insert(highest, candidate.positions.iter().copied().collect());
            let next = highest.saturating_sub(self.adjacency + 1);
            let rest = remainder - &candidate.sum;
            self.search(next, &rest, picks, found, limit, target);
            picks.remove(&highest);
            if found.len() == limit {
                return;
            }
        }
        // The empty pick: leave this bin out entirely.
        self.search(highest - 1, remainder, picks, found, limit, target);
    }
}

/// Find one legal decomposition of `x` against `seq`, if any.
///
/// # Examples
///
/// ```
/// use num_bigint::BigUint;
/// use binseq_core::{build_sequence, decompose, parse_schedule, DEFAULT_STATE_CAP};
///
/// let schedule = parse_schedule("const:1/zero-one/adj:1").unwrap();
/// let seq = build_sequence(&schedule, 20, DEFAULT_STATE_CAP).unwrap();
/// let d = decompose(&seq, &BigUint::from(2019u32)).unwrap().unwrap();
/// let summands: Vec<String> = d.summands(&seq).unwrap().iter().map(|s| s.to_string()).collect();
/// assert_eq!(summands, ["3", "8", "34", "377", "1597"]);
/// ```
pub fn decompose(seq: &Sequence, x: &BigUint) -> Result<Option<Decomposition>> {
    Decomposer::new(seq)?.decompose(x)
}

/// Enumerate up to `limit` decompositions of `x` against `seq`.
pub fn enumerate_decompositions(
    seq: &Sequence,
    x: &BigUint,
    limit: usize,
) -> Result<DecompositionSet> {
    Decomposer::new(seq)?.enumerate(x, limit)
}

/// Total number of summands a decomposition uses.
pub fn count_summands(d: &Decomposition) -> u64 {
    d.count_summands()
}
