//! Uniqueness analysis: a structural classifier over schedules, an
//! exhaustive decomposition-counting oracle over materialized sequences,
//! and the divisibility structure of tail terms.
//!
//! The classifier and the oracle answer the same question two ways. With
//! no adjacency constraint, a schedule yields one decomposition per
//! positive integer exactly when every bin's allowed counts form one of
//! three shapes: `{0,1}`, `{0,…,b−1}`, or `{0,…,b}`. Anything else breaks
//! uniqueness, and the first offending bin can be labeled with the exact
//! way it breaks — either the counts run `0..k` and then skip `k+1`
//! (two different selections collide just past the skip), or they jump
//! straight from `1` to some `k ≥ 3` (the collision depends on how the
//! bin size compares to `k`). The oracle simply counts decompositions for
//! every integer up to a bound and reports the first anomaly.

use std::thread;

use num_bigint::BigUint;
use num_traits::One;

use crate::constructor::{achievable_sums, omega, DEFAULT_STATE_CAP};
use crate::decomposer::Decomposer;
use crate::error::{Error, Result};
use crate::schedule::{AllowedSet, BinSchedule};
use crate::sequence::{Decomposition, Sequence};

/// Default bound for exhaustive verification when the caller gives none;
/// collisions, when they exist, show up well below this.
pub const DEFAULT_VERIFY_BOUND: u64 = 10_000;

/// Which of the three uniqueness-preserving count shapes a bin matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllowedForm {
    /// Counts are exactly `{0,1}`.
    ZeroOne,
    /// Counts are exactly `{0,…,b}` for bin size `b`.
    Full,
    /// Counts are exactly `{0,…,b−1}` for bin size `b`.
    FullBelow,
}

impl std::fmt::Display for AllowedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AllowedForm::ZeroOne => write!(f, "{{0,1}}"),
            AllowedForm::Full => write!(f, "{{0..b}}"),
            AllowedForm::FullBelow => write!(f, "{{0..b-1}}"),
        }
    }
}

/// How a failing bin's size compares to its first skipped-to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTwoShape {
    /// `b = k`: the bin is exactly as large as the jump target.
    SizeEqualsK,
    /// `b = k + 1`.
    SizeEqualsKPlusOne,
    /// `b ≥ k + 2`.
    SizeAtLeastKPlusTwo,
}

impl std::fmt::Display for CaseTwoShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTwoShape::SizeEqualsK => write!(f, "b=k"),
            CaseTwoShape::SizeEqualsKPlusOne => write!(f, "b=k+1"),
            CaseTwoShape::SizeAtLeastKPlusTwo => write!(f, "b>=k+2"),
        }
    }
}

/// The precise way a bin's allowed counts break uniqueness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureCase {
    /// Counts contain `{0,…,k}` for some `k ≥ 2` but not `k+1`.
    CaseI { k: u64 },
    /// Counts contain `{0,1}`, skip `2`, and jump to some `k ≥ 3`.
    CaseII { k: u64, shape: CaseTwoShape },
}

impl std::fmt::Display for FailureCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureCase::CaseI { k } => write!(f, "Case I (k={k})"),
            FailureCase::CaseII { k, shape } => write!(f, "Case II (k={k}, {shape})"),
        }
    }
}

/// Verdict for one bin of the classified schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinReason {
    /// The bin's counts match a uniqueness-preserving shape.
    Matches(AllowedForm),
    /// The bin's counts provably break uniqueness.
    Fails(FailureCase),
    /// The bin lacks count 0 or count 1; the case analysis does not
    /// apply, so no verdict can be given structurally.
    MissingBase,
}

impl std::fmt::Display for BinReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BinReason::Matches(form) => write!(f, "matches {form}"),
            BinReason::Fails(case) => write!(f, "fails: {case}"),
            BinReason::MissingBase => write!(f, "lacks count 0 or 1; not classifiable"),
        }
    }
}

/// Overall structural verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierVerdict {
    Unique,
    NotUnique,
    OutOfTheoremScope,
}

impl std::fmt::Display for ClassifierVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassifierVerdict::Unique => write!(f, "unique"),
            ClassifierVerdict::NotUnique => write!(f, "not-unique"),
            ClassifierVerdict::OutOfTheoremScope => write!(f, "out-of-theorem-scope"),
        }
    }
}

/// Structural classification of a schedule's first `num_bins` bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierReport {
    verdict: ClassifierVerdict,
    adjacency: usize,
    /// One `(bin, reason)` entry per bin examined; scanning stops at the
    /// first bin that does not match a uniqueness-preserving shape.
    per_bin: Vec<(usize, BinReason)>,
}

impl ClassifierReport {
    pub fn verdict(&self) -> ClassifierVerdict {
        self.verdict
    }

    /// Adjacency parameter of the classified schedule.
    pub fn adjacency(&self) -> usize {
        self.adjacency
    }

    pub fn per_bin(&self) -> &[(usize, BinReason)] {
        &self.per_bin
    }

    /// First non-matching bin and its reason, if any.
    pub fn first_failure(&self) -> Option<(usize, BinReason)> {
        self.per_bin
            .iter()
            .find(|(_, r)| !matches!(r, BinReason::Matches(_)))
            .copied()
    }
}

/// Result of exhaustively counting decompositions for `1..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmpiricalFinding {
    /// Every integer in range has exactly one decomposition.
    ConfirmedUnique,
    /// `x` has at least these two distinct decompositions.
    Collision {
        x: BigUint,
        first: Decomposition,
        second: Decomposition,
    },
    /// `x` has no decomposition at all.
    CoverageGap { x: BigUint },
}

/// Outcome of [`verify_exhaustive`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalReport {
    bound: u64,
    finding: EmpiricalFinding,
}

impl EmpiricalReport {
    /// Upper end of the verified range `1..=bound`.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn finding(&self) -> &EmpiricalFinding {
        &self.finding
    }

    /// True when the range was anomaly-free.
    pub fn is_unique(&self) -> bool {
        matches!(self.finding, EmpiricalFinding::ConfirmedUnique)
    }
}

impl std::fmt::Display for EmpiricalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.finding {
            EmpiricalFinding::ConfirmedUnique => {
                write!(f, "confirmed-unique up to {}", self.bound)
            }
            EmpiricalFinding::Collision { x, .. } => write!(f, "collision found at x={x}"),
            EmpiricalFinding::CoverageGap { x } => write!(f, "coverage gap at x={x}"),
        }
    }
}

/// Result of [`divisibility_check`]: from bin `n0` onward, every term is
/// a multiple of `k+1`, where the earlier bins reach exactly `{1,…,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityReport {
    n0: usize,
    k: BigUint,
    modulus: BigUint,
    all_divisible: bool,
    first_indivisible: Option<(usize, BigUint)>,
}

impl DivisibilityReport {
    pub fn n0(&self) -> usize {
        self.n0
    }

    /// Largest sum reachable from bins before `n0` (they reach `{0,…,k}`).
    pub fn k(&self) -> &BigUint {
        &self.k
    }

    /// The divisor being tested, `k + 1`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn all_divisible(&self) -> bool {
        self.all_divisible
    }

    /// First `(bin, term)` from `n0` onward that is not a multiple of
    /// `k+1`, when any exists.
    pub fn first_indivisible(&self) -> Option<&(usize, BigUint)> {
        self.first_indivisible.as_ref()
    }
}

fn form_of(allowed: &AllowedSet) -> Option<AllowedForm> {
    let b = allowed.bin_size();
    let is_range = |hi: u64| allowed.counts().iter().copied().eq(0..=hi);
    if allowed.counts().iter().copied().eq([0, 1]) {
        Some(AllowedForm::ZeroOne)
    } else if is_range(b) {
        Some(AllowedForm::Full)
    } else if b >= 1 && is_range(b - 1) {
        Some(AllowedForm::FullBelow)
    } else {
        None
    }
}

fn classify_bin(allowed: &AllowedSet) -> BinReason {
    if let Some(form) = form_of(allowed) {
        return BinReason::Matches(form);
    }
    if !allowed.contains(0) || !allowed.contains(1) {
        return BinReason::MissingBase;
    }
    // Longest initial run 0,1,…,k of allowed counts.
    let mut k = 1u64;
    while allowed.contains(k + 1) {
        k += 1;
    }
    if k >= 2 {
        // k ≤ b−2 is automatic: a longer run would match a shape above.
        return BinReason::Fails(FailureCase::CaseI { k });
    }
    // Run stops at 1 but the set is bigger than {0,1}: find the jump.
    let jump = allowed
        .counts()
        .iter()
        .copied()
        .find(|&c| c > 1)
        .expect("a non-matching set containing {0,1} has a count above 1");
    let b = allowed.bin_size();
    let shape = if b == jump {
        CaseTwoShape::SizeEqualsK
    } else if b == jump + 1 {
        CaseTwoShape::SizeEqualsKPlusOne
    } else {
        CaseTwoShape::SizeAtLeastKPlusTwo
    };
    BinReason::Fails(FailureCase::CaseII { k: jump, shape })
}

/// Classify a schedule structurally: `unique` when every bin's counts
/// match a uniqueness-preserving shape, `not-unique` with a labeled
/// failure otherwise. Schedules with a nonzero adjacency parameter, or a
/// first offending bin that lacks count 0 or 1, fall outside the case
/// analysis and return `out-of-theorem-scope`.
pub fn classify(schedule: &BinSchedule, num_bins: usize) -> Result<ClassifierReport> {
    if num_bins == 0 {
        return Err(Error::Precondition("num_bins must be positive".into()));
    }
    let adjacency = schedule.adjacency();
    if adjacency != 0 {
        return Ok(ClassifierReport {
            verdict: ClassifierVerdict::OutOfTheoremScope,
            adjacency,
            per_bin: Vec::new(),
        });
    }
    let mut per_bin = Vec::with_capacity(num_bins);
    let mut verdict = ClassifierVerdict::Unique;
    for n in 1..=num_bins {
        let reason = classify_bin(&schedule.allowed(n)?);
        per_bin.push((n, reason));
        match reason {
            BinReason::Matches(_) => {}
            BinReason::Fails(_) => {
                verdict = ClassifierVerdict::NotUnique;
                break;
            }
            BinReason::MissingBase => {
                verdict = ClassifierVerdict::OutOfTheoremScope;
                break;
            }
        }
    }
    Ok(ClassifierReport {
        verdict,
        adjacency,
        per_bin,
    })
}

fn scan_range(dec: &Decomposer, lo: u64, hi: u64) -> Result<Option<EmpiricalFinding>> {
    for x in lo..=hi {
        let value = BigUint::from(x);
        let set = dec.enumerate(&value, 2)?;
        match set.len() {
            0 => return Ok(Some(EmpiricalFinding::CoverageGap { x: value })),
            1 => {}
            _ => {
                let first = set.found()[0].clone();
                let second = set.found()[1].clone();
                first.validate(dec.sequence())?;
                second.validate(dec.sequence())?;
                return Ok(Some(EmpiricalFinding::Collision {
                    x: value,
                    first,
                    second,
                }));
            }
        }
    }
    Ok(None)
}

/// Count decompositions of every integer in `1..=bound` and report the
/// first collision or coverage gap, if any. `threads` workers split the
/// range into contiguous chunks; the reported anomaly is always the one
/// at the smallest `x`, independent of thread count.
pub fn verify_exhaustive(seq: &Sequence, bound: u64, threads: usize) -> Result<EmpiricalReport> {
    if bound == 0 {
        return Err(Error::Precondition("bound must be positive".into()));
    }
    let reach = omega(seq, seq.num_bins())?;
    if BigUint::from(bound) > reach {
        return Err(Error::Precondition(format!(
            "bound {bound} exceeds the largest reachable sum {reach}"
        )));
    }
    let dec = Decomposer::new(seq)?;
    let workers = threads.max(1).min(usize::try_from(bound).unwrap_or(usize::MAX));
    let finding = if workers == 1 {
        scan_range(&dec, 1, bound)?
    } else {
        let chunk = bound.div_ceil(workers as u64);
        let ranges: Vec<(u64, u64)> = (0..workers as u64)
            .map(|w| (1 + w * chunk, ((w + 1) * chunk).min(bound)))
            .filter(|(lo, hi)| lo <= hi)
            .collect();
        let dec_ref = &dec;
        let results: Vec<Result<Option<EmpiricalFinding>>> = thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || scan_range(dec_ref, lo, hi)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification worker panicked"))
                .collect()
        });
        // Chunks are ascending, so the first finding has the smallest x.
        let mut first = None;
        for result in results {
            if let Some(finding) = result? {
                first = Some(finding);
                break;
            }
        }
        first
    };
    Ok(EmpiricalReport {
        bound,
        finding: finding.unwrap_or(EmpiricalFinding::ConfirmedUnique),
    })
}

/// Check the tail-divisibility structure: if bins `1..n0−1` reach exactly
/// the sums `{0,…,k}`, every term from bin `n0` onward should be a
/// multiple of `k+1`. Errors when the early bins leave a gap below their
/// maximum (the premise would be vacuous).
pub fn divisibility_check(seq: &Sequence, n0: usize) -> Result<DivisibilityReport> {
    if n0 == 0 || n0 > seq.num_bins() {
        return Err(Error::Precondition(format!(
            "n0 must lie in 1..={}",
            seq.num_bins()
        )));
    }
    let sums = achievable_sums(seq, n0 - 1, DEFAULT_STATE_CAP)?;
    if !sums.is_initial_interval() {
        return Err(Error::Precondition(format!(
            "bins before {n0} do not reach an unbroken range: {} is missing below {}",
            sums.min_excluded(),
            sums.max()
        )));
    }
    let k = sums.max().clone();
    let modulus = &k + BigUint::one();
    let mut first_indivisible = None;
    for n in n0..=seq.num_bins() {
        for term in seq.bin(n)? {
            if term % &modulus != BigUint::ZERO {
                first_indivisible = Some((n, term.clone()));
                break;
            }
        }
        if first_indivisible.is_some() {
            break;
        }
    }
    Ok(DivisibilityReport {
        n0,
        k,
        modulus,
        all_divisible: first_indivisible.is_none(),
        first_indivisible,
    })
}
