//! Bin-size and allowed-count rules.
//!
//! A schedule is assembled from two interchangeable strategies: a
//! [`SizeRule`] mapping bin index to bin size, and a [`CountRule`] mapping
//! bin index (and size) to the set of allowed pick counts. Each strategy is
//! identified by the keyword it uses in schedule text (`const`, `affine`,
//! `zero-one`, ...) and is looked up by that name in the
//! [`RuleRegistry`](super::registry::RuleRegistry) at parse time.

use std::fmt;
use std::sync::Arc;

use super::AllowedSet;
use crate::error::{Error, Result};

/// Strategy mapping a 1-based bin index to the bin's size.
pub trait SizeRule: fmt::Debug + Send + Sync {
    /// Keyword under which the rule is registered (`const`, `affine`, ...).
    fn keyword(&self) -> &'static str;

    /// Size of bin `n` (1-based). Sizes are always at least 1; rules whose
    /// parameters would produce a smaller (or overflowing) size report a
    /// schedule error instead.
    fn bin_size(&self, n: usize) -> Result<u64>;

    /// Canonical argument text, or `None` for keyword-only rules.
    fn render_args(&self) -> Option<String>;

    /// Canonical schedule-text fragment for this rule.
    fn render(&self) -> String {
        match self.render_args() {
            Some(args) => format!("{}:{}", self.keyword(), args),
            None => self.keyword().to_string(),
        }
    }
}

/// Strategy mapping a 1-based bin index and bin size to the allowed counts.
pub trait CountRule: fmt::Debug + Send + Sync {
    /// Keyword under which the rule is registered (`zero-one`, `set`, ...).
    fn keyword(&self) -> &'static str;

    /// Allowed pick counts for bin `n` of size `bin_size`. Every count must
    /// lie in `0..=bin_size`; rules report a schedule error otherwise.
    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet>;

    /// Canonical argument text, or `None` for keyword-only rules.
    fn render_args(&self) -> Option<String>;

    /// Canonical schedule-text fragment for this rule.
    fn render(&self) -> String {
        match self.render_args() {
            Some(args) => format!("{}:{}", self.keyword(), args),
            None => self.keyword().to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// Size rules
// ---------------------------------------------------------------------------

/// `const:c` — every bin has size `c`.
#[derive(Debug, Clone)]
pub struct ConstSize(pub u64);

impl SizeRule for ConstSize {
    fn keyword(&self) -> &'static str {
        "const"
    }

    fn bin_size(&self, _n: usize) -> Result<u64> {
        Ok(self.0)
    }

    fn render_args(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

/// `affine:a,b` — bin `n` has size `a*n + b`.
#[derive(Debug, Clone)]
pub struct AffineSize {
    pub slope: i64,
    pub offset: i64,
}

impl SizeRule for AffineSize {
    fn keyword(&self) -> &'static str {
        "affine"
    }

    fn bin_size(&self, n: usize) -> Result<u64> {
        let v = self.slope as i128 * n as i128 + self.offset as i128;
        if v < 1 {
            return Err(Error::Schedule(format!(
                "bin {n} would have size {v}; sizes must be at least 1"
            )));
        }
        u64::try_from(v)
            .map_err(|_| Error::Schedule(format!("bin {n} size overflows: {v}")))
    }

    fn render_args(&self) -> Option<String> {
        Some(format!("{},{}", self.slope, self.offset))
    }
}

/// `pow:p` — bin `n` has size `n^p`.
#[derive(Debug, Clone)]
pub struct PowSize(pub u32);

impl SizeRule for PowSize {
    fn keyword(&self) -> &'static str {
        "pow"
    }

    fn bin_size(&self, n: usize) -> Result<u64> {
        u64::try_from(n)
            .ok()
            .and_then(|n| n.checked_pow(self.0))
            .ok_or_else(|| Error::Schedule(format!("bin {n} size overflows: {n}^{}", self.0)))
    }

    fn render_args(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

/// `list:b1,b2,...` — explicit finite list of bin sizes.
#[derive(Debug, Clone)]
pub struct ListSize(pub Vec<u64>);

impl SizeRule for ListSize {
    fn keyword(&self) -> &'static str {
        "list"
    }

    fn bin_size(&self, n: usize) -> Result<u64> {
        self.0.get(n.wrapping_sub(1)).copied().ok_or_else(|| {
            Error::Schedule(format!(
                "list schedule defines {} bins; bin {n} requested",
                self.0.len()
            ))
        })
    }

    fn render_args(&self) -> Option<String> {
        Some(
            self.0
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        )
    }
}

// ---------------------------------------------------------------------------
// Count rules
// ---------------------------------------------------------------------------

/// `zero-one` — allowed counts `{0, 1}` in every bin.
#[derive(Debug, Clone)]
pub struct ZeroOne;

impl CountRule for ZeroOne {
    fn keyword(&self) -> &'static str {
        "zero-one"
    }

    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet> {
        AllowedSet::new(n, bin_size, [0, 1].into_iter().collect())
    }

    fn render_args(&self) -> Option<String> {
        None
    }
}

/// `full` — allowed counts `{0, 1, ..., b_n}` in every bin.
#[derive(Debug, Clone)]
pub struct Full;

impl CountRule for Full {
    fn keyword(&self) -> &'static str {
        "full"
    }

    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet> {
        AllowedSet::new(n, bin_size, (0..=bin_size).collect())
    }

    fn render_args(&self) -> Option<String> {
        None
    }
}

/// `full-minus` — allowed counts `{0, 1, ..., b_n - 1}` in every bin.
#[derive(Debug, Clone)]
pub struct FullMinus;

impl CountRule for FullMinus {
    fn keyword(&self) -> &'static str {
        "full-minus"
    }

    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet> {
        AllowedSet::new(n, bin_size, (0..bin_size).collect())
    }

    fn render_args(&self) -> Option<String> {
        None
    }
}

/// `set:c1,c2,...` — one explicit count set used for every bin.
#[derive(Debug, Clone)]
pub struct ExplicitSet(pub std::collections::BTreeSet<u64>);

impl CountRule for ExplicitSet {
    fn keyword(&self) -> &'static str {
        "set"
    }

    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet> {
        AllowedSet::new(n, bin_size, self.0.clone())
    }

    fn render_args(&self) -> Option<String> {
        Some(
            self.0
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        )
    }
}

/// `pair:g` — allowed counts `{0, g}`: take `g` elements from a bin or none.
#[derive(Debug, Clone)]
pub struct PairCount(pub u64);

impl CountRule for PairCount {
    fn keyword(&self) -> &'static str {
        "pair"
    }

    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet> {
        AllowedSet::new(n, bin_size, [0, self.0].into_iter().collect())
    }

    fn render_args(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

/// `floordiv:k` — allowed counts `{0, 1, ..., floor(n/k)}` for bin `n`.
#[derive(Debug, Clone)]
pub struct FloorDiv(pub u64);

impl CountRule for FloorDiv {
    fn keyword(&self) -> &'static str {
        "floordiv"
    }

    fn allowed_counts(&self, n: usize, bin_size: u64) -> Result<AllowedSet> {
        let top = n as u64 / self.0;
        AllowedSet::new(n, bin_size, (0..=top).collect())
    }

    fn render_args(&self) -> Option<String> {
        Some(self.0.to_string())
    }
}

// ---------------------------------------------------------------------------
// Builtin parsers (registered by keyword in the default registry)
// ---------------------------------------------------------------------------

pub(super) fn parse_const(args: Option<&str>, at: usize) -> Result<Arc<dyn SizeRule>> {
    let c = super::parse::require_uint(args, at, "const")?;
    if c == 0 {
        return Err(Error::Schedule("const bin size must be at least 1".into()));
    }
    Ok(Arc::new(ConstSize(c)))
}

pub(super) fn parse_affine(args: Option<&str>, at: usize) -> Result<Arc<dyn SizeRule>> {
    let (slope, offset) = super::parse::require_int_pair(args, at, "affine")?;
    Ok(Arc::new(AffineSize { slope, offset }))
}

pub(super) fn parse_pow(args: Option<&str>, at: usize) -> Result<Arc<dyn SizeRule>> {
    let p = super::parse::require_uint(args, at, "pow")?;
    let p = u32::try_from(p)
        .map_err(|_| Error::Schedule(format!("pow exponent {p} is too large")))?;
    Ok(Arc::new(PowSize(p)))
}

pub(super) fn parse_list(args: Option<&str>, at: usize) -> Result<Arc<dyn SizeRule>> {
    let sizes = super::parse::require_uint_list(args, at, "list")?;
    if sizes.iter().any(|&b| b == 0) {
        return Err(Error::Schedule("list bin sizes must be at least 1".into()));
    }
    Ok(Arc::new(ListSize(sizes)))
}

pub(super) fn parse_zero_one(args: Option<&str>, at: usize) -> Result<Arc<dyn CountRule>> {
    super::parse::forbid_args(args, at, "zero-one")?;
    Ok(Arc::new(ZeroOne))
}

pub(super) fn parse_full(args: Option<&str>, at: usize) -> Result<Arc<dyn CountRule>> {
    super::parse::forbid_args(args, at, "full")?;
    Ok(Arc::new(Full))
}

pub(super) fn parse_full_minus(args: Option<&str>, at: usize) -> Result<Arc<dyn CountRule>> {
    super::parse::forbid_args(args, at, "full-minus")?;
    Ok(Arc::new(FullMinus))
}

pub(super) fn parse_set(args: Option<&str>, at: usize) -> Result<Arc<dyn CountRule>> {
    let counts = super::parse::require_uint_list(args, at, "set")?;
    Ok(Arc::new(ExplicitSet(counts.into_iter().collect())))
}

pub(super) fn parse_pair(args: Option<&str>, at: usize) -> Result<Arc<dyn CountRule>> {
    let g = super::parse::require_uint(args, at, "pair")?;
    if g == 0 {
        return Err(Error::Schedule("pair count must be at least 1".into()));
    }
    Ok(Arc::new(PairCount(g)))
}

pub(super) fn parse_floordiv(args: Option<&str>, at: usize) -> Result<Arc<dyn CountRule>> {
    let k = super::parse::require_uint(args, at, "floordiv")?;
    if k == 0 {
        return Err(Error::Schedule("floordiv divisor must be at least 1".into()));
    }
    Ok(Arc::new(FloorDiv(k)))
}
