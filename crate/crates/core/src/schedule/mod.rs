//! Schedule grammar: bin sizes, allowed pick counts, adjacency.
//!
//! A schedule describes an infinite family of bins. Bin `n` (1-based) has
//! `b_n` elements, a decomposition may take `i` elements from bin `n` only
//! for `i` in the allowed set `A_n`, and two bins used by the same
//! decomposition must have indices differing by more than the adjacency
//! parameter `a`.
//!
//! Schedule text has three `/`-separated fields:
//!
//! ```text
//! SPEC      := SIZESPEC "/" ALLOWSPEC "/" "adj:" UINT
//! SIZESPEC  := "const:" UINT | "affine:" INT "," INT | "pow:" UINT
//!            | "list:" UINT ("," UINT)*
//! ALLOWSPEC := "zero-one" | "full" | "full-minus"
//!            | "set:" UINT ("," UINT)* | "pair:" UINT | "floordiv:" UINT
//! ```
//!
//! For example `const:2/zero-one/adj:1` reads: every bin has two elements,
//! a decomposition takes at most one element per bin, and used bins must be
//! more than one index apart. The grammar is closed — there are no general
//! expressions — but the keyword set itself is extensible through
//! [`RuleRegistry`].

mod parse;
mod registry;
pub mod rules;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use registry::{default_registry, CountRuleParser, RuleRegistry, SizeRuleParser};
pub use rules::{CountRule, SizeRule};

use crate::error::{Error, Result};

/// Expanded allowed pick counts for one bin.
///
/// Always non-empty, and every count fits in the bin: `max_count() <=
/// bin_size()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllowedSet {
    bin_size: u64,
    counts: BTreeSet<u64>,
}

impl AllowedSet {
    /// Validate and wrap an explicit count set for a bin of size
    /// `bin_size`. `n` is only used in error messages.
    pub fn new(n: usize, bin_size: u64, counts: BTreeSet<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Schedule(format!("bin {n} has an empty allowed set")));
        }
        if let Some(&max) = counts.iter().next_back() {
            if max > bin_size {
                return Err(Error::Schedule(format!(
                    "bin {n} allows picking {max} elements but only has {bin_size}"
                )));
            }
        }
        Ok(AllowedSet { bin_size, counts })
    }

    /// Size of the bin these counts refer to.
    pub fn bin_size(&self) -> u64 {
        self.bin_size
    }

    /// The allowed counts, ascending.
    pub fn counts(&self) -> &BTreeSet<u64> {
        &self.counts
    }

    /// Whether `count` is an allowed number of picks.
    pub fn contains(&self, count: u64) -> bool {
        self.counts.contains(&count)
    }

    /// Largest allowed count.
    pub fn max_count(&self) -> u64 {
        *self.counts.iter().next_back().expect("allowed set is non-empty")
    }

    /// Second-largest allowed count, if the set has more than one element.
    pub fn second_max_count(&self) -> Option<u64> {
        self.counts.iter().rev().nth(1).copied()
    }

    /// The allowed counts that are nonzero, ascending.
    pub fn nonzero_counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.iter().copied().filter(|&c| c > 0)
    }

    /// Number of allowed counts.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    /// Always false; kept for iterator-style call sites.
    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for AllowedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A parsed schedule: size rule, count rule, and adjacency parameter.
///
/// Rendering and parsing are inverse on canonical text:
/// `parse_schedule(s.render()).render() == s.render()`.
#[derive(Clone)]
pub struct BinSchedule {
    size_rule: Arc<dyn SizeRule>,
    count_rule: Arc<dyn CountRule>,
    adjacency: usize,
}

impl BinSchedule {
    /// Parse schedule text against the builtin rule registry.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::parse_with(default_registry(), spec)
    }

    /// Parse schedule text against a caller-supplied registry.
    pub fn parse_with(registry: &RuleRegistry, spec: &str) -> Result<Self> {
        let [(size_at, size_field), (count_at, count_field), (adj_at, adj_field)] =
            parse::split_fields(spec)?;

        let (kw, kw_at, args, args_at) = parse::split_keyword(size_field, size_at);
        let size_rule = registry.parse_size(kw, args, kw_at, args_at)?;

        let (kw, kw_at, args, args_at) = parse::split_keyword(count_field, count_at);
        let count_rule = registry.parse_count(kw, args, kw_at, args_at)?;

        let (kw, kw_at, args, args_at) = parse::split_keyword(adj_field, adj_at);
        if kw != "adj" {
            return Err(Error::Parse {
                position: kw_at,
                message: format!("expected `adj:<n>`, found `{adj_field}`"),
            });
        }
        let adjacency = parse::require_uint(args, args_at, "adj")?;
        let adjacency = usize::try_from(adjacency).map_err(|_| Error::Parse {
            position: args_at,
            message: format!("adjacency {adjacency} is too large"),
        })?;

        let schedule = BinSchedule {
            size_rule,
            count_rule,
            adjacency,
        };
        // Eager sanity check: bin 1 must expand. Later bins are validated
        // when an operation actually asks for them.
        schedule.allowed(1)?;
        Ok(schedule)
    }

    /// Assemble a schedule directly from rule objects.
    ///
    /// Bin 1 must expand cleanly, as it would after parsing.
    pub fn from_rules(
        size_rule: Arc<dyn SizeRule>,
        count_rule: Arc<dyn CountRule>,
        adjacency: usize,
    ) -> Result<Self> {
        let schedule = BinSchedule {
            size_rule,
            count_rule,
            adjacency,
        };
        schedule.allowed(1)?;
        Ok(schedule)
    }

    /// Canonical schedule text. Parsing it back yields an equal schedule.
    pub fn render(&self) -> String {
        format!(
            "{}/{}/adj:{}",
            self.size_rule.render(),
            self.count_rule.render(),
            self.adjacency
        )
    }

    /// Size of bin `n` (1-based).
    pub fn bin_size(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return Err(Error::Precondition("bin indices are 1-based".into()));
        }
        self.size_rule.bin_size(n)
    }

    /// Allowed pick counts for bin `n` (1-based).
    pub fn allowed(&self, n: usize) -> Result<AllowedSet> {
        let b = self.bin_size(n)?;
        self.count_rule.allowed_counts(n, b)
    }

    /// Adjacency parameter: used bins must differ in index by more than
    /// this.
    pub fn adjacency(&self) -> usize {
        self.adjacency
    }

    /// The size rule strategy.
    pub fn size_rule(&self) -> &Arc<dyn SizeRule> {
        &self.size_rule
    }

    /// The count rule strategy.
    pub fn count_rule(&self) -> &Arc<dyn CountRule> {
        &self.count_rule
    }
}

impl fmt::Display for BinSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for BinSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinSchedule({})", self.render())
    }
}

impl PartialEq for BinSchedule {
    fn eq(&self, other: &Self) -> bool {
        self.render() == other.render()
    }
}

impl Eq for BinSchedule {}

/// Parse schedule text against the builtin registry.
///
/// # Examples
///
/// ```
/// use binseq_core::parse_schedule;
/// let s = parse_schedule("const:2/zero-one/adj:1").unwrap();
/// assert_eq!(s.bin_size(5).unwrap(), 2);
/// assert_eq!(s.adjacency(), 1);
/// ```
pub fn parse_schedule(spec: &str) -> Result<BinSchedule> {
    BinSchedule::parse(spec)
}

/// Expand the allowed pick counts of bin `n` under `schedule`.
pub fn expand_allowed(schedule: &BinSchedule, n: usize) -> Result<AllowedSet> {
    schedule.allowed(n)
}
