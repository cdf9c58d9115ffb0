//! Keyword registry for schedule rules.
//!
//! The registry maps rule keywords to parser functions producing trait
//! objects. Parsing a schedule looks each field's keyword up here, so the
//! set of available strategies is data, not a hard-coded match: callers can
//! register additional rules and parse schedules against their own registry.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::sync::OnceLock;

use super::rules;
use super::rules::{CountRule, SizeRule};
use crate::error::{Error, Result};

/// Parser for one size-rule keyword: receives the argument text after the
/// colon (if any) and its byte offset within the schedule string.
pub type SizeRuleParser =
    Box<dyn Fn(Option<&str>, usize) -> Result<Arc<dyn SizeRule>> + Send + Sync>;

/// Parser for one count-rule keyword.
pub type CountRuleParser =
    Box<dyn Fn(Option<&str>, usize) -> Result<Arc<dyn CountRule>> + Send + Sync>;

/// Name-indexed collection of schedule rule parsers.
pub struct RuleRegistry {
    size_rules: BTreeMap<String, SizeRuleParser>,
    count_rules: BTreeMap<String, CountRuleParser>,
}

impl RuleRegistry {
    /// Empty registry with no rules at all.
    pub fn empty() -> Self {
        RuleRegistry {
            size_rules: BTreeMap::new(),
            count_rules: BTreeMap::new(),
        }
    }

    /// Registry holding the builtin rules: sizes `const`, `affine`, `pow`,
    /// `list` and counts `zero-one`, `full`, `full-minus`, `set`, `pair`,
    /// `floordiv`.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register_size_rule("const", Box::new(rules::parse_const));
        reg.register_size_rule("affine", Box::new(rules::parse_affine));
        reg.register_size_rule("pow", Box::new(rules::parse_pow));
        reg.register_size_rule("list", Box::new(rules::parse_list));
        reg.register_count_rule("zero-one", Box::new(rules::parse_zero_one));
        reg.register_count_rule("full", Box::new(rules::parse_full));
        reg.register_count_rule("full-minus", Box::new(rules::parse_full_minus));
        reg.register_count_rule("set", Box::new(rules::parse_set));
        reg.register_count_rule("pair", Box::new(rules::parse_pair));
        reg.register_count_rule("floordiv", Box::new(rules::parse_floordiv));
        reg
    }

    /// Register (or replace) a size rule under `keyword`.
    pub fn register_size_rule(&mut self, keyword: &str, parser: SizeRuleParser) {
        self.size_rules.insert(keyword.to_string(), parser);
    }

    /// Register (or replace) a count rule under `keyword`.
    pub fn register_count_rule(&mut self, keyword: &str, parser: CountRuleParser) {
        self.count_rules.insert(keyword.to_string(), parser);
    }

    /// Registered size-rule keywords, sorted.
    pub fn size_keywords(&self) -> Vec<&str> {
        self.size_rules.keys().map(String::as_str).collect()
    }

    /// Registered count-rule keywords, sorted.
    pub fn count_keywords(&self) -> Vec<&str> {
        self.count_rules.keys().map(String::as_str).collect()
    }

    pub(super) fn parse_size(
        &self,
        keyword: &str,
        args: Option<&str>,
        keyword_at: usize,
        args_at: usize,
    ) -> Result<Arc<dyn SizeRule>> {
        match self.size_rules.get(keyword) {
            Some(parser) => parser(args, args_at),
            None => Err(Error::Parse {
                position: keyword_at,
                message: format!(
                    "unknown size rule `{keyword}` (expected one of: {})",
                    self.size_keywords().join(", ")
                ),
            }),
        }
    }

    pub(super) fn parse_count(
        &self,
        keyword: &str,
        args: Option<&str>,
        keyword_at: usize,
        args_at: usize,
    ) -> Result<Arc<dyn CountRule>> {
        match self.count_rules.get(keyword) {
            Some(parser) => parser(args, args_at),
            None => Err(Error::Parse {
                position: keyword_at,
                message: format!(
                    "unknown count rule `{keyword}` (expected one of: {})",
                    self.count_keywords().join(", ")
                ),
            }),
        }
    }
}

/// Shared instance of the builtin registry, used by
/// [`parse_schedule`](super::parse_schedule).
pub fn default_registry() -> &'static RuleRegistry {
    static REGISTRY: OnceLock<RuleRegistry> = OnceLock::new();
    REGISTRY.get_or_init(RuleRegistry::builtin)
}
