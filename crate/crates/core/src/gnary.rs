//! Fixed-count ("pick exactly g or nothing") sequences.
//!
//! These sequences drop the requirement to represent every positive
//! integer: each bin allows exactly `g` picks or none, and the sequence
//! is grown so that all legal selections keep pairwise-distinct sums.
//! Two constructions are provided. The brute-force one fills each bin
//! with the lexicographically smallest complete assignment preserving
//! distinct sums — whole bins at a time, because a term that looks fine
//! on its own can make the rest of the bin impossible to fill. The
//! gap-formula one starts each bin at the previous bin's last element
//! and spaces elements uniformly by one more than the largest sum
//! reachable so far; it reproduces the brute-force result on the
//! canonical `b=3, g=2` family but can differ elsewhere (notably when
//! `g = 1`, where reusing the boundary element creates a duplicated
//! single-element sum), so agreement is something to measure, not
//! assume.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::binom::binomial;
use crate::constructor::{achievable_sums, omegas, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::schedule::parse_schedule;
use crate::sequence::{Sequence, SequenceMode};

/// Candidate elements for a bin are searched up to
/// `last_term + factor · (Ω+1) · b`; this default is generous, since a
/// valid element always exists within one `Ω+1` step of the previous.
pub const DEFAULT_WINDOW_FACTOR: u64 = 4;

/// Searches for the lexicographically smallest valid completion of one
/// bin, maintaining the running set of selection sums incrementally.
struct BinSearch<'a> {
    prior: &'a BTreeSet<BigUint>,
    /// Positive pairwise differences of `prior`, when the pair-swap
    /// prune below is sound; `None` disables the prune.
    diffs: Option<BTreeSet<BigUint>>,
    working: BTreeSet<BigUint>,
    elements: Vec<BigUint>,
    g: usize,
    b: usize,
    limit: BigUint,
}

impl<'a> BinSearch<'a> {
    fn new(prior: &'a BTreeSet<BigUint>, b: u64, g: u64, limit: BigUint) -> Self {
        // Swapping one element for another inside a pick changes the sum
        // by their difference; if that difference also separates two
        // prior sums, the two selections collide. The swap needs g−1
        // shared companions avoiding both elements, which a full bin
        // guarantees when b ≥ g+1 (and trivially when g = 1). Outside
        // that regime — or when `prior` is large — skip the prune; the
        // incremental check below stays authoritative either way.
        let diffs = if (g == 1 || b >= g + 1) && prior.len() <= 5_000 {
            let mut set = BTreeSet::new();
            for lo in prior {
                for hi in prior.range(lo..).skip(1) {
                    set.insert(hi - lo);
                }
            }
            Some(set)
        } else {
            None
        };
        BinSearch {
            prior,
            diffs,
            working: prior.clone(),
            elements: Vec::new(),
            g: g as usize,
            b: b as usize,
            limit,
        }
    }

    fn admissible(&self, v: &BigUint) -> bool {
        match &self.diffs {
            Some(diffs) => self.elements.iter().all(|e| !diffs.contains(&(v - e))),
            None => true,
        }
    }

    /// Add `v` as the next bin element, recording every selection sum it
    /// completes. Returns the recorded sums for rollback, or `None` on a
    /// collision (with the working set restored).
    fn try_add(&mut self, v: &BigUint) -> Option<Vec<BigUint>> {
        let mut added: Vec<BigUint> = Vec::new();
        if self.elements.len() + 1 >= self.g {
            for companions in self.elements.iter().combinations(self.g - 1) {
                let pick: BigUint = companions.iter().copied().sum::<BigUint>() + v;
                for s in self.prior {
                    let sum = &pick + s;
                    if self.working.contains(&sum) {
                        for s in added {
                            self.working.remove(&s);
                        }
                        return None;
                    }
                    self.working.insert(sum.clone());
                    added.push(sum);
                }
            }
        }
        Some(added)
    }

    /// Depth-first search over ascending elements; the first complete
    /// assignment found is the lexicographically smallest one.
    fn fill(&mut self, lo: BigUint) -> bool {
        if self.elements.len() == self.b {
            return true;
        }
        let mut v = lo;
        while v <= self.limit {
            if self.admissible(&v) {
                if let Some(added) = self.try_add(&v) {
                    self.elements.push(v.clone());
                    if self.fill(&v + 1u32) {
                        return true;
                    }
                    self.elements.pop();
                    for s in added {
                        self.working.remove(&s);
                    }
                }
            }
            v += 1u32;
        }
        false
    }
}

fn check_bg(b: u64, g: u64, num_bins: usize) -> Result<()> {
    if g == 0 || g > b {
        return Err(Error::Precondition(format!(
            "need 1 <= g <= b, got g={g}, b={b}"
        )));
    }
    if num_bins == 0 {
        return Err(Error::Precondition("num_bins must be positive".into()));
    }
    Ok(())
}

fn wrap_bins(b: u64, g: u64, bins: Vec<Vec<BigUint>>) -> Result<Sequence> {
    let schedule = parse_schedule(&format!("const:{b}/pair:{g}/adj:0"))?;
    Sequence::new(schedule, SequenceMode::Gnary, bins)
}

/// Smallest first element allowed for the next bin: the previous bin's
/// last element, or 1 for the first bin.
fn bin_floor(bins: &[Vec<BigUint>]) -> BigUint {
    bins.last()
        .and_then(|bin| bin.last())
        .cloned()
        .unwrap_or_else(BigUint::one)
}

/// Fill `num_bins` bins of size `b` with pick count `g` by exhaustive
/// whole-bin search: each bin is the lexicographically smallest
/// strictly-increasing assignment (first element no smaller than the
/// previous bin's last) keeping all selection sums pairwise distinct.
pub fn build_gnary_bruteforce(b: u64, g: u64, num_bins: usize) -> Result<Sequence> {
    build_gnary_bruteforce_with(b, g, num_bins, DEFAULT_WINDOW_FACTOR)
}

/// [`build_gnary_bruteforce`] with an explicit candidate-window factor;
/// elements for a bin are searched up to `floor + factor·(Ω+1)·b`.
pub fn build_gnary_bruteforce_with(
    b: u64,
    g: u64,
    num_bins: usize,
    window_factor: u64,
) -> Result<Sequence> {
    check_bg(b, g, num_bins)?;
    let mut sums: BTreeSet<BigUint> = BTreeSet::new();
    sums.insert(BigUint::zero());
    let mut bins: Vec<Vec<BigUint>> = Vec::with_capacity(num_bins);
    for bin_index in 1..=num_bins {
        let floor = bin_floor(&bins);
        let omega = sums.iter().next_back().cloned().unwrap_or_default();
        let limit = &floor + (omega + 1u32) * window_factor * b;
        let mut search = BinSearch::new(&sums, b, g, limit.clone());
        if !search.fill(floor) {
            return Err(Error::SearchWindow {
                bin: bin_index,
                limit: limit.to_string(),
            });
        }
        let BinSearch {
            working, elements, ..
        } = search;
        sums = working;
        bins.push(elements);
    }
    wrap_bins(b, g, bins)
}

/// Closed-form construction: bin 1 is the brute-force bin 1; every
/// later bin starts at the previous bin's last element with uniform
/// internal gap `Ω+1`, recomputing `Ω` (which grows by the sum of the
/// bin's `g` largest elements) after each bin. Always produces output;
/// whether the result preserves distinct sums is checked separately.
pub fn build_gnary_gapformula(b: u64, g: u64, num_bins: usize) -> Result<Sequence> {
    check_bg(b, g, num_bins)?;
    let first = build_gnary_bruteforce_with(b, g, 1, DEFAULT_WINDOW_FACTOR)?;
    let mut bins: Vec<Vec<BigUint>> = first.bins().to_vec();
    let mut omega: BigUint = bins[0].iter().rev().take(g as usize).sum();
    for _ in 2..=num_bins {
        let start = bin_floor(&bins);
        let step = &omega + 1u32;
        let bin: Vec<BigUint> = (0..b).map(|j| &start + &step * j).collect();
        omega += bin.iter().rev().take(g as usize).sum::<BigUint>();
        bins.push(bin);
    }
    wrap_bins(b, g, bins)
}

/// Representable-integer count through bin `n`, with the closed-form
/// predictions to compare against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentableCount {
    n: usize,
    actual: u64,
    predicted_constant: Option<BigUint>,
    predicted_general: BigUint,
}

impl RepresentableCount {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of distinct selection sums through bin `n`, 0 included.
    pub fn actual(&self) -> u64 {
        self.actual
    }

    /// `(C(b,g)+1)^n`, defined when bins `1..=n` share one size `b`.
    pub fn predicted_constant(&self) -> Option<&BigUint> {
        self.predicted_constant.as_ref()
    }

    /// The general prediction `1 + Σ_{i=1}^n C(n,i)·C(b_i,g)^i`, which
    /// reduces to the constant-size form when all sizes agree.
    pub fn predicted_general(&self) -> &BigUint {
        &self.predicted_general
    }
}

/// The single nonzero pick count of a fixed-count sequence; errors if
/// any bin's allowed counts are not of the form `{0, g}` with one
/// common `g`.
fn pick_count(seq: &Sequence) -> Result<u64> {
    let mut g: Option<u64> = None;
    for n in 1..=seq.num_bins() {
        let allowed = seq.schedule().allowed(n)?;
        let counts: Vec<u64> = allowed.counts().iter().copied().collect();
        let this = match counts.as_slice() {
            [0, g] => *g,
            _ => {
                return Err(Error::Precondition(format!(
                    "bin {n} allows counts {allowed}, not a {{0,g}} pair"
                )))
            }
        };
        match g {
            None => g = Some(this),
            Some(prev) if prev == this => {}
            Some(prev) => {
                return Err(Error::Precondition(format!(
                    "pick count changes from {prev} to {this} at bin {n}"
                )))
            }
        }
    }
    g.ok_or_else(|| Error::Precondition("sequence has no bins".into()))
}

/// Count distinct selection sums through bin `n` and evaluate the
/// closed-form predictions.
pub fn count_representable(seq: &Sequence, n: usize) -> Result<RepresentableCount> {
    if n == 0 || n > seq.num_bins() {
        return Err(Error::Precondition(format!(
            "n must lie in 1..={}",
            seq.num_bins()
        )));
    }
    let g = pick_count(seq)?;
    let sums = achievable_sums(seq, n, DEFAULT_STATE_CAP)?;
    let sizes: Vec<u64> = (1..=n)
        .map(|i| seq.schedule().bin_size(i))
        .collect::<Result<_>>()?;
    let constant = sizes.iter().all(|&b| b == sizes[0]);
    let predicted_constant =
        constant.then(|| (binomial(sizes[0], g) + BigUint::one()).pow(n as u32));
    let mut predicted_general = BigUint::one();
    for i in 1..=n {
        predicted_general += binomial(n as u64, i as u64) * binomial(sizes[i - 1], g).pow(i as u32);
    }
    Ok(RepresentableCount {
        n,
        actual: sums.len() as u64,
        predicted_constant,
        predicted_general,
    })
}

/// Gap and coverage report for a fixed-count sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnaryReport {
    omegas: Vec<BigUint>,
    gaps: Vec<Vec<BigUint>>,
    gap_verdicts: Vec<Vec<bool>>,
    uniform_gap_is_omega_plus_one: Vec<bool>,
    representable: Vec<RepresentableCount>,
}

impl GnaryReport {
    /// `Ω_0..=Ω_N`: largest selection sum through each prefix of bins.
    pub fn omegas(&self) -> &[BigUint] {
        &self.omegas
    }

    /// `gaps()[n-1][j-2]` is `G_{n,j}`, the difference between the
    /// `j`-th and `(j−1)`-st elements of bin `n`.
    pub fn gaps(&self) -> &[Vec<BigUint>] {
        &self.gaps
    }

    /// Parallel to [`gaps`](Self::gaps): whether `G_{n,j} > Ω_{n−1}`.
    pub fn gap_verdicts(&self) -> &[Vec<bool>] {
        &self.gap_verdicts
    }

    /// Whether every gap in the sequence exceeds the largest sum
    /// reachable before its bin (vacuously true with no gaps).
    pub fn all_gaps_exceed_prior_omega(&self) -> bool {
        self.gap_verdicts.iter().flatten().all(|&v| v)
    }

    /// Per bin: whether the bin's gaps are uniform and equal exactly
    /// `Ω_{n−1} + 1` (vacuously true for single-element bins).
    pub fn uniform_gap_is_omega_plus_one(&self) -> &[bool] {
        &self.uniform_gap_is_omega_plus_one
    }

    /// Representable-count rows for `n = 1..=N`.
    pub fn representable(&self) -> &[RepresentableCount] {
        &self.representable
    }
}

/// Compute every gap `G_{n,j}`, compare each against `Ω_{n−1}`, check
/// the uniform-gap spacing, and tabulate representable counts.
pub fn gap_report(seq: &Sequence) -> Result<GnaryReport> {
    if seq.mode() != SequenceMode::Gnary {
        return Err(Error::Precondition(
            "gap analysis applies to fixed-count sequences".into(),
        ));
    }
    let omega_values = omegas(seq)?;
    let mut gaps = Vec::with_capacity(seq.num_bins());
    let mut verdicts = Vec::with_capacity(seq.num_bins());
    let mut uniform = Vec::with_capacity(seq.num_bins());
    for n in 1..=seq.num_bins() {
        let bin = seq.bin(n)?;
        let bin_gaps: Vec<BigUint> = bin.windows(2).map(|w| &w[1] - &w[0]).collect();
        let prior = &omega_values[n - 1];
        verdicts.push(bin_gaps.iter().map(|gap| gap > prior).collect());
        let step = prior + BigUint::one();
        uniform.push(bin_gaps.iter().all(|gap| *gap == step));
        gaps.push(bin_gaps);
    }
    let representable = (1..=seq.num_bins())
        .map(|n| count_representable(seq, n))
        .collect::<Result<_>>()?;
    Ok(GnaryReport {
        omegas: omega_values,
        gaps,
        gap_verdicts: verdicts,
        uniform_gap_is_omega_plus_one: uniform,
        representable,
    })
}
