//! Bin-based integer sequences with exact arithmetic.
//!
//! A *schedule* assigns every bin `n` a size `b_n`, a set `A_n` of
//! allowed pick counts, and one global adjacency gap `a`; a legal
//! selection takes an allowed number of elements from each used bin
//! with used bin indices pairwise more than `a` apart. This crate
//! builds the greedy sequence a schedule induces (each new term is the
//! least integer no legal selection reaches), decomposes integers
//! against it, classifies and verifies uniqueness of those
//! decompositions, computes the exact summand-count statistics behind
//! their central limit behavior, and constructs two specialized
//! families: fixed-count sequences (every used bin contributes exactly
//! `g` elements) and the Zeckendorf tree (growing bins, nonadjacent
//! levels). All arithmetic is arbitrary-precision; anything stated
//! about a sequence is checked, never assumed.
//!
//! Schedules are written in a small grammar, e.g.
//! `const:2/zero-one/adj:1` (bins of two elements, take zero or one,
//! used bins more than one apart — the binary-like family) or
//! `const:1/zero-one/adj:1` (the Fibonacci rule). See
//! [`parse_schedule`] for the full grammar and [`RuleRegistry`] for
//! extending it with new size or count rules.

pub mod binom;
pub mod constructor;
pub mod decomposer;
pub mod error;
pub mod gnary;
pub mod schedule;
pub mod sequence;
pub mod stats;
pub mod tree;
pub mod uniqueness;

pub use binom::binomial;
pub use constructor::{
    achievable_sums, build_sequence, omega, omegas, AchievableSums, DEFAULT_STATE_CAP,
};
pub use decomposer::{
    count_summands, decompose, enumerate_decompositions, Decomposer, DecompositionSet,
    DEFAULT_ENUM_LIMIT,
};
pub use error::{Error, Result};
pub use gnary::{
    build_gnary_bruteforce, build_gnary_bruteforce_with, build_gnary_gapformula,
    count_representable, gap_report, GnaryReport, RepresentableCount, DEFAULT_WINDOW_FACTOR,
};
pub use schedule::{
    default_registry, parse_schedule, AllowedSet, BinSchedule, CountRule, RuleRegistry, SizeRule,
};
pub use sequence::{Decomposition, Sequence, SequenceMode};
pub use stats::{
    bin_moments, bin_pmf, empirical_summand_pmf, gaussian_distance, lyapunov_series,
    model_summand_pmf, standard_normal_cdf, theorem35_check, BinPmf, GaussReport, LyapunovRow,
    LyapunovSeries, MomentTriple, PmfSource, SummandPmf, Theorem35Report,
};
pub use tree::{
    bin_equivalence_check, build_tree, recurrence_check, telephone_check, RecurrenceMismatch,
    RecurrenceReading, RecurrenceReport, ZeckTree,
};
pub use uniqueness::{
    classify, divisibility_check, verify_exhaustive, AllowedForm, BinReason, CaseTwoShape,
    ClassifierReport, ClassifierVerdict, DivisibilityReport, EmpiricalFinding, EmpiricalReport,
    FailureCase, DEFAULT_VERIFY_BOUND,
};
