//! A deliberately naive selection enumerator shared by the oracle tests.
//!
//! The library walks bins top-down with pruning; this oracle instead
//! walks bins bottom-up and materializes every legal selection without
//! any shortcuts, so the two can only agree by computing the same thing.

// Each test binary uses its own subset of these helpers.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use binseq_core::{BinSchedule, Sequence};
use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;

/// Picked positions per 1-based bin, empty picks omitted.
pub type Picks = BTreeMap<usize, BTreeSet<usize>>;

/// Enumerate every legal selection over `bins` (the last of which may be
/// partially filled): each used bin contributes an allowed count of its
/// present elements, and used bin indices pairwise differ by more than
/// the schedule's adjacency. The empty selection (sum 0) is included.
pub fn all_selections(schedule: &BinSchedule, bins: &[Vec<BigUint>]) -> Vec<(BigUint, Picks)> {
    let mut out = Vec::new();
    let mut picks = Picks::new();
    recurse(schedule, bins, 1, None, &BigUint::ZERO, &mut picks, &mut out);
    out
}

fn recurse(
    schedule: &BinSchedule,
    bins: &[Vec<BigUint>],
    n: usize,
    last_used: Option<usize>,
    sum: &BigUint,
    picks: &mut Picks,
    out: &mut Vec<(BigUint, Picks)>,
) {
    if n > bins.len() {
        out.push((sum.clone(), picks.clone()));
        return;
    }
    // Leave bin n unused.
    recurse(schedule, bins, n + 1, last_used, sum, picks, out);
    // Or use it, if adjacency permits.
    if last_used.is_some_and(|prev| n - prev <= schedule.adjacency()) {
        return;
    }
    let bin = &bins[n - 1];
    let allowed = schedule.allowed(n).expect("bin is within the schedule");
    for &count in allowed.counts() {
        if count == 0 || count as usize > bin.len() {
            continue;
        }
        for positions in (0..bin.len()).combinations(count as usize) {
            let total = sum + positions.iter().map(|&p| &bin[p]).sum::<BigUint>();
            picks.insert(n, positions.into_iter().collect());
            recurse(schedule, bins, n + 1, Some(n), &total, picks, out);
            picks.remove(&n);
        }
    }
}

/// Every selection of a fully materialized sequence.
pub fn selections_of(seq: &Sequence) -> Vec<(BigUint, Picks)> {
    all_selections(seq.schedule(), seq.bins())
}

/// The distinct selection sums over possibly partial bins. Same walk as
/// [`all_selections`] but without materializing pick maps, since the
/// mex replay calls this once per inserted term.
pub fn selection_sums(schedule: &BinSchedule, bins: &[Vec<BigUint>]) -> BTreeSet<BigUint> {
    let mut sums = BTreeSet::new();
    sums_recurse(schedule, bins, 1, None, &BigUint::ZERO, &mut sums);
    sums
}

fn sums_recurse(
    schedule: &BinSchedule,
    bins: &[Vec<BigUint>],
    n: usize,
    last_used: Option<usize>,
    sum: &BigUint,
    sums: &mut BTreeSet<BigUint>,
) {
    if n > bins.len() {
        sums.insert(sum.clone());
        return;
    }
    sums_recurse(schedule, bins, n + 1, last_used, sum, sums);
    if last_used.is_some_and(|prev| n - prev <= schedule.adjacency()) {
        return;
    }
    let bin = &bins[n - 1];
    let allowed = schedule.allowed(n).expect("bin is within the schedule");
    for &count in allowed.counts() {
        if count == 0 || count as usize > bin.len() {
            continue;
        }
        for positions in (0..bin.len()).combinations(count as usize) {
            let total = sum + positions.iter().map(|&p| &bin[p]).sum::<BigUint>();
            sums_recurse(schedule, bins, n + 1, Some(n), &total, sums);
        }
    }
}

/// Number of distinct selections reaching each sum (the empty selection
/// counts once toward sum 0).
pub fn selection_sum_counts(
    schedule: &BinSchedule,
    bins: &[Vec<BigUint>],
) -> BTreeMap<BigUint, u64> {
    let mut counts = BTreeMap::new();
    counts_recurse(schedule, bins, 1, None, &BigUint::ZERO, &mut counts);
    counts
}

fn counts_recurse(
    schedule: &BinSchedule,
    bins: &[Vec<BigUint>],
    n: usize,
    last_used: Option<usize>,
    sum: &BigUint,
    counts: &mut BTreeMap<BigUint, u64>,
) {
    if n > bins.len() {
        *counts.entry(sum.clone()).or_insert(0) += 1;
        return;
    }
    counts_recurse(schedule, bins, n + 1, last_used, sum, counts);
    if last_used.is_some_and(|prev| n - prev <= schedule.adjacency()) {
        return;
    }
    let bin = &bins[n - 1];
    let allowed = schedule.allowed(n).expect("bin is within the schedule");
    for &count in allowed.counts() {
        if count == 0 || count as usize > bin.len() {
            continue;
        }
        for positions in (0..bin.len()).combinations(count as usize) {
            let total = sum + positions.iter().map(|&p| &bin[p]).sum::<BigUint>();
            counts_recurse(schedule, bins, n + 1, Some(n), &total, counts);
        }
    }
}

/// Least positive integer that no legal selection reaches.
pub fn oracle_mex(schedule: &BinSchedule, bins: &[Vec<BigUint>]) -> BigUint {
    let sums = selection_sums(schedule, bins);
    let mut x = BigUint::one();
    while sums.contains(&x) {
        x += 1u32;
    }
    x
}
