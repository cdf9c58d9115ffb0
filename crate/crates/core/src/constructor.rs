//! Greedy sequence construction and the achievable-sums engine behind it.
//!
//! The construction appends, one term at a time, the least positive integer
//! that is not yet the value of any legal decomposition. Tracking "every
//! legal sum so far" is the whole game: we keep a map from sum to the most
//! permissive adjacency obligation under which it is reachable, extend it
//! incrementally as terms are appended, and read the next term off the
//! first gap above zero.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::schedule::{AllowedSet, BinSchedule};
use crate::sequence::{Sequence, SequenceMode};

/// Default ceiling on the number of tracked (sum, tag) states.
///
/// The reachable-sum set grows exponentially in the number of bins for
/// generous count sets, so unbounded construction would exhaust memory
/// silently; exceeding the cap is an explicit error instead.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// Tag for sums whose most recent pick is too old to constrain any future
/// bin.
const FREE: usize = 0;

/// Every sum legally reachable from a prefix of bins, with adjacency tags.
///
/// Each entry maps a reachable sum to the lowest bin index that can serve
/// as its most recent pick, or to a sentinel when the sum is reachable with
/// all picks outside the trailing adjacency window. A lower tag permits
/// strictly more continuations, so dominated (higher-tag) duplicates are
/// dropped; this loses no reachable sums. The empty selection contributes
/// the sum 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableSums {
    adjacency: usize,
    through_bin: usize,
    /// sum -> minimal viable tag; tag [`FREE`] means "no pick within the
    /// adjacency window ending at `through_bin`".
    states: BTreeMap<BigUint, usize>,
}

impl AchievableSums {
    /// Highest bin folded into this state.
    pub fn through_bin(&self) -> usize {
        self.through_bin
    }

    /// Adjacency parameter of the generating schedule.
    pub fn adjacency(&self) -> usize {
        self.adjacency
    }

    /// Number of tracked states (one per distinct reachable sum).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True only for a freshly initialized engine; 0 is always reachable.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// All reachable sums, ascending. Includes 0 (the empty selection).
    pub fn plain_sums(&self) -> impl Iterator<Item = &BigUint> {
        self.states.keys()
    }

    /// The (sum, tag) pairs, ascending by sum. A tag of `None` is the
    /// sentinel: no pick inside the trailing adjacency window; `Some(m)`
    /// means the latest pick can be placed in bin `m` but no earlier.
    pub fn states(&self) -> impl Iterator<Item = (&BigUint, Option<usize>)> {
        self.states
            .iter()
            .map(|(sum, &tag)| (sum, (tag != FREE).then_some(tag)))
    }

    /// Whether `sum` is legally reachable.
    pub fn contains(&self, sum: &BigUint) -> bool {
        self.states.contains_key(sum)
    }

    /// Largest reachable sum.
    pub fn max(&self) -> &BigUint {
        self.states
            .keys()
            .next_back()
            .expect("0 is always reachable")
    }

    /// Least positive integer that is not reachable.
    pub fn min_excluded(&self) -> BigUint {
        let mut expected = BigUint::zero();
        for sum in self.states.keys() {
            if *sum > expected {
                break;
            }
            expected = sum + 1u32;
        }
        if expected.is_zero() {
            BigUint::one()
        } else {
            expected
        }
    }

    /// True when the reachable sums are exactly {0, 1, ..., max}.
    pub fn is_initial_interval(&self) -> bool {
        BigUint::from(self.states.len()) == self.max() + 1u32
    }
}

/// Incremental reachable-sum state machine.
///
/// Bins are entered in index order; within a bin, elements are fed one at a
/// time so that the least-unreachable query stays correct mid-bin. The
/// per-bin bookkeeping tracks subset sums of the elements seen so far in
/// the open bin, keyed by how many elements they use, because only subset
/// sizes in the bin's allowed-count set produce legal picks.
struct Engine<'a> {
    schedule: &'a BinSchedule,
    state_cap: usize,
    states: BTreeMap<BigUint, usize>,
    /// Monotone cursor for the least-unreachable query.
    mex: BigUint,
    open: Option<OpenBin>,
}

struct OpenBin {
    n: usize,
    allowed: AllowedSet,
    /// Sums reachable without any pick in the adjacency window at the time
    /// this bin opened; only these may be extended by a pick from it.
    bases: Vec<BigUint>,
    /// Subset sum of the open bin's elements -> subset sizes achieving it.
    /// Sizes above the largest allowed count are never recorded.
    prefix: BTreeMap<BigUint, BTreeSet<u64>>,
    /// Subset sums whose size set already meets the allowed counts.
    usable: BTreeSet<BigUint>,
}

impl<'a> Engine<'a> {
    fn new(schedule: &'a BinSchedule, state_cap: usize) -> Self {
        let mut states = BTreeMap::new();
        states.insert(BigUint::zero(), FREE);
        Engine {
            schedule,
            state_cap,
            states,
            mex: BigUint::one(),
            open: None,
        }
    }

    /// Open bin `n`, retiring adjacency tags it can no longer see.
    fn start_bin(&mut self, n: usize) -> Result<()> {
        debug_assert!(self.open.is_none());
        let a = self.schedule.adjacency();
        for tag in self.states.values_mut() {
            if *tag != FREE && n - *tag > a {
                *tag = FREE;
            }
        }
        let bases: Vec<BigUint> = self
            .states
            .iter()
            .filter(|&(_, &tag)| tag == FREE)
            .map(|(sum, _)| sum.clone())
            .collect();
        self.open = Some(OpenBin {
            n,
            allowed: self.schedule.allowed(n)?,
            bases,
            prefix: BTreeMap::new(),
            usable: BTreeSet::new(),
        });
        Ok(())
    }

    /// Append one element to the open bin and fold in the sums it unlocks.
    fn add_element(&mut self, element: &BigUint) -> Result<()> {
        let open = self.open.as_mut().expect("a bin is open");
        let max_count = open.allowed.max_count();

        // Subset sums gaining the new element; sizes grow by one.
        let mut grown: Vec<(BigUint, u64)> = vec![(element.clone(), 1)];
        for (sum, sizes) in &open.prefix {
            for &size in sizes {
                if size < max_count {
                    grown.push((sum + element, size + 1));
                }
            }
        }

        let mut unlocked: Vec<BigUint> = Vec::new();
        for (sum, size) in grown {
            let sizes = open.prefix.entry(sum.clone()).or_default();
            if sizes.insert(size)
                && size > 0
                && open.allowed.contains(size)
                && !open.usable.contains(&sum)
            {
                open.usable.insert(sum.clone());
                unlocked.push(sum);
            }
        }

        for pick in &unlocked {
            for base in &open.bases {
                let reached = base + pick;
                let tag = self.states.entry(reached).or_insert(open.n);
                // An existing lower tag dominates; never raise it.
                if *tag > open.n {
                    *tag = open.n;
                }
            }
            if self.states.len() > self.state_cap {
                return Err(Error::StateCap {
                    bin: open.n,
                    cap: self.state_cap,
                });
            }
        }
        Ok(())
    }

    fn finish_bin(&mut self) {
        self.open = None;
    }

    /// Least positive integer not currently reachable.
    fn min_excluded(&mut self) -> BigUint {
        while self.states.contains_key(&self.mex) {
            self.mex += 1u32;
        }
        self.mex.clone()
    }

    /// Seal the engine after `through_bin` bins: tags invisible to every
    /// future bin collapse to the sentinel.
    fn into_sums(mut self, through_bin: usize) -> AchievableSums {
        let a = self.schedule.adjacency();
        for tag in self.states.values_mut() {
            if *tag != FREE && through_bin + 1 - *tag > a {
                *tag = FREE;
            }
        }
        AchievableSums {
            adjacency: a,
            through_bin,
            states: self.states,
        }
    }
}

/// Build `num_bins` full bins by the greedy least-unreachable rule.
///
/// Every appended term is the smallest positive integer that no legal
/// decomposition over the terms already present can reach. The schedule
/// must allow counts 0 and 1 in every bin in range: without 0 a bin would
/// be forced into every decomposition, and without 1 the first term of the
/// bin could never be used alone, so the rule would stall.
///
/// # Examples
///
/// ```
/// use binseq_core::{build_sequence, parse_schedule, DEFAULT_STATE_CAP};
///
/// let schedule = parse_schedule("const:1/zero-one/adj:1").unwrap();
/// let seq = build_sequence(&schedule, 7, DEFAULT_STATE_CAP).unwrap();
/// let terms: Vec<String> = seq.terms().map(|t| t.to_string()).collect();
/// assert_eq!(terms, ["1", "2", "3", "5", "8", "13", "21"]);
/// ```
pub fn build_sequence(
    schedule: &BinSchedule,
    num_bins: usize,
    state_cap: usize,
) -> Result<Sequence> {
    if num_bins == 0 {
        return Err(Error::Precondition(
            "construction needs at least one bin".into(),
        ));
    }
    for n in 1..=num_bins {
        let allowed = schedule.allowed(n)?;
        if !allowed.contains(0) || !allowed.contains(1) {
            return Err(Error::Schedule(format!(
                "standard construction requires counts 0 and 1 in every bin; \
                 bin {n} allows {allowed}"
            )));
        }
    }

    let mut engine = Engine::new(schedule, state_cap);
    let mut bins: Vec<Vec<BigUint>> = Vec::with_capacity(num_bins);
    for n in 1..=num_bins {
        let size = schedule.bin_size(n)?;
        engine.start_bin(n)?;
        let mut bin = Vec::with_capacity(size as usize);
        for _ in 0..size {
            let term = engine.min_excluded();
            engine.add_element(&term)?;
            bin.push(term);
        }
        engine.finish_bin();
        bins.push(bin);
    }
    Sequence::new(schedule.clone(), SequenceMode::Standard, bins)
}

/// Compute every sum reachable from bins 1..=`through_bin` of `seq`.
///
/// Works for any materialized sequence, including ones whose schedule
/// forbids single picks (the count-pair construction), since it never
/// invokes the greedy rule.
pub fn achievable_sums(
    seq: &Sequence,
    through_bin: usize,
    state_cap: usize,
) -> Result<AchievableSums> {
    if through_bin > seq.num_bins() {
        return Err(Error::Precondition(format!(
            "asked for bins through {through_bin}, sequence has {}",
            seq.num_bins()
        )));
    }
    let mut engine = Engine::new(seq.schedule(), state_cap);
    for n in 1..=through_bin {
        engine.start_bin(n)?;
        for element in seq.bin(n)? {
            engine.add_element(element)?;
        }
        engine.finish_bin();
    }
    Ok(engine.into_sums(through_bin))
}

/// Largest sum reachable from bins 1..=n, for every n from 0 to
/// `seq.num_bins()`.
///
/// Maximizing needs no state set: with best[n] the answer through bin n,
/// either bin n is unused (best[n-1]) or its heaviest allowed pick joins
/// the best over bins that respect adjacency (best[n-a-1]).
pub fn omegas(seq: &Sequence) -> Result<Vec<BigUint>> {
    let a = seq.schedule().adjacency();
    let mut best: Vec<BigUint> = Vec::with_capacity(seq.num_bins() + 1);
    best.push(BigUint::zero());
    for n in 1..=seq.num_bins() {
        let bin = seq.bin(n)?;
        let allowed = seq.schedule().allowed(n)?;
        // Heaviest pick: the largest allowed count of the largest elements.
        let mut heaviest = BigUint::zero();
        let mut tail_sum = BigUint::zero();
        let mut taken = 0u64;
        for element in bin.iter().rev() {
            tail_sum += element;
            taken += 1;
            if allowed.contains(taken) && tail_sum > heaviest {
                heaviest = tail_sum.clone();
            }
        }
        let before_window = if n > a { &best[n - a - 1] } else { &best[0] };
        let with_pick = heaviest + before_window;
        let without = best[n - 1].clone();
        best.push(with_pick.max(without));
    }
    Ok(best)
}

/// Largest sum reachable from bins 1..=n. `n = 0` gives 0.
pub fn omega(seq: &Sequence, n: usize) -> Result<BigUint> {
    if n > seq.num_bins() {
        return Err(Error::Precondition(format!(
            "asked for omega through bin {n}, sequence has {}",
            seq.num_bins()
        )));
    }
    Ok(omegas(seq)?.swap_remove(n))
}
