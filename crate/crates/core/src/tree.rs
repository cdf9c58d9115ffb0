//! The Zeckendorf tree: a two-dimensional arrangement of integers with
//! unique nonadjacent-level decompositions.
//!
//! Level `i` of the tree holds exactly `i` terms. Candidate integers are
//! examined in increasing order, and a candidate joins the tree exactly
//! when it is *not* expressible as a sum taking at most one existing
//! term per level with the used levels pairwise nonadjacent. Three
//! structural facts about the result are checked here rather than
//! assumed: its left diagonal satisfies the involution-count recurrence
//! `d_n = d_{n-1} + (n-1)·d_{n-2}`, its flattened terms coincide with
//! the bin construction of sizes `1, 2, 3, …` under adjacency 1, and
//! its terms satisfy a two-case level recurrence. The natural statement
//! of that recurrence references a phantom position 0 that the tree
//! does not define, so [`recurrence_check`] evaluates every plausible
//! assignment of the phantom and reports mismatches per reading instead
//! of committing to one.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::constructor::{build_sequence, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::schedule::parse_schedule;

/// A fully built tree: `levels()[i-1]` holds the `i` terms of level `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeckTree {
    levels: Vec<Vec<BigUint>>,
}

impl ZeckTree {
    /// Wrap pre-computed levels, validating the shape (level `i` has
    /// exactly `i` terms) and that terms strictly increase in reading
    /// order starting from a positive first term.
    pub fn from_levels(levels: Vec<Vec<BigUint>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Precondition("a tree needs at least one level".into()));
        }
        for (idx, level) in levels.iter().enumerate() {
            if level.len() != idx + 1 {
                return Err(Error::Precondition(format!(
                    "level {} holds {} terms, expected {}",
                    idx + 1,
                    level.len(),
                    idx + 1
                )));
            }
        }
        let mut prev = BigUint::zero();
        for term in levels.iter().flatten() {
            if *term <= prev {
                return Err(Error::Precondition(
                    "terms must strictly increase in reading order".into(),
                ));
            }
            prev = term.clone();
        }
        Ok(ZeckTree { levels })
    }

    /// All levels, in order.
    pub fn levels(&self) -> &[Vec<BigUint>] {
        &self.levels
    }

    /// Number of levels.
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Terms of level `i` (1-based).
    pub fn level(&self, i: usize) -> Result<&[BigUint]> {
        if i == 0 || i > self.levels.len() {
            return Err(Error::Precondition(format!(
                "level {i} is not built (have 1..={})",
                self.levels.len()
            )));
        }
        Ok(&self.levels[i - 1])
    }

    /// Term at (1-based level, 1-based position).
    pub fn term(&self, i: usize, j: usize) -> Result<&BigUint> {
        let level = self.level(i)?;
        if j == 0 || j > level.len() {
            return Err(Error::Precondition(format!(
                "level {i} has no position {j}"
            )));
        }
        Ok(&level[j - 1])
    }

    /// First term of each level, top to bottom.
    pub fn diagonal(&self) -> Vec<&BigUint> {
        self.levels.iter().map(|level| &level[0]).collect()
    }

    /// All terms in reading order.
    pub fn terms(&self) -> impl Iterator<Item = &BigUint> {
        self.levels.iter().flatten()
    }
}

impl fmt::Display for ZeckTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, level) in self.levels.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", " ".repeat(self.levels.len() - idx - 1))?;
            for (j, term) in level.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{term}")?;
            }
        }
        Ok(())
    }
}

/// Can `x` be written as a sum over levels `1..=highest`, at most one
/// term per level, used levels pairwise nonadjacent? Levels may be
/// partially filled while the tree is under construction.
fn representable(levels: &[Vec<BigUint>], highest: usize, x: &BigUint) -> bool {
    if x.is_zero() {
        return true;
    }
    if highest == 0 {
        return false;
    }
    for term in levels[highest - 1].iter().rev() {
        if term <= x && representable(levels, highest.saturating_sub(2), &(x - term)) {
            return true;
        }
    }
    representable(levels, highest - 1, x)
}

/// Build the tree with `num_levels` complete levels by the insertion
/// rule: integers are examined in increasing order and appended exactly
/// when they are not representable from the terms placed so far.
pub fn build_tree(num_levels: usize) -> Result<ZeckTree> {
    if num_levels == 0 {
        return Err(Error::Precondition("a tree needs at least one level".into()));
    }
    let mut levels: Vec<Vec<BigUint>> = vec![Vec::new()];
    let mut total = BigUint::zero();
    let mut x = BigUint::from(1u32);
    loop {
        let current = levels.len();
        if levels[current - 1].len() == current {
            if current == num_levels {
                break;
            }
            levels.push(Vec::new());
            continue;
        }
        // Anything beyond the sum of all placed terms is unrepresentable
        // and would have been placed immediately, so the scan can never
        // get this far; treat it as a bug rather than looping.
        if x > &total + 1u32 {
            return Err(Error::EnumerationCap(format!(
                "tree scan passed {x} without filling level {current}"
            )));
        }
        if !representable(&levels, current, &x) {
            levels[current - 1].push(x.clone());
            total += &x;
        }
        x += 1u32;
    }
    ZeckTree::from_levels(levels)
}

/// Does the tree's left diagonal satisfy the involution-count
/// recurrence `d_1 = 1`, `d_2 = 2`, `d_n = d_{n-1} + (n-1)·d_{n-2}`?
pub fn telephone_check(tree: &ZeckTree) -> Result<bool> {
    if tree.num_levels() < 3 {
        return Err(Error::Precondition(
            "the diagonal recurrence needs at least three levels".into(),
        ));
    }
    let d = tree.diagonal();
    if *d[0] != BigUint::from(1u32) || *d[1] != BigUint::from(2u32) {
        return Ok(false);
    }
    for n in 3..=d.len() {
        let predicted = d[n - 2] + d[n - 3] * (n as u32 - 1);
        if *d[n - 1] != predicted {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does the flattened tree equal the bin construction with bin sizes
/// `1, 2, 3, …`, one term per used bin, and used bins nonadjacent?
pub fn bin_equivalence_check(num_levels: usize) -> Result<bool> {
    let tree = build_tree(num_levels)?;
    let schedule = parse_schedule("affine:1,0/zero-one/adj:1")?;
    let seq = build_sequence(&schedule, num_levels, DEFAULT_STATE_CAP)?;
    Ok(tree.terms().eq(seq.terms()))
}

/// A candidate assignment of the phantom position 0 that the level
/// recurrence references but the tree never defines.
///
/// The recurrence in question has two cases for a term at (level `i`,
/// position `j`):
///
/// * step, `j > 1`: the previous term in the level plus the phantom of
///   level `i−1`;
/// * opening, `j = 1`: the last term of level `i−1` plus the phantom of
///   level `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RecurrenceReading {
    /// The phantom of level `x` is that level's own first term.
    SameLevel,
    /// The phantom of level `x` is the first term of level `x−1`.
    LevelAbove,
    /// Per-case split: the step case reads the phantom as the first
    /// term of the level it names (`i−1`), while the opening case reads
    /// it as the first term two levels up (`i−2`).
    Split,
}

impl RecurrenceReading {
    /// All readings, in the order reports list them.
    pub const ALL: [RecurrenceReading; 3] = [
        RecurrenceReading::SameLevel,
        RecurrenceReading::LevelAbove,
        RecurrenceReading::Split,
    ];
}

impl fmt::Display for RecurrenceReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RecurrenceReading::SameLevel => "same-level",
            RecurrenceReading::LevelAbove => "level-above",
            RecurrenceReading::Split => "split",
        };
        f.write_str(name)
    }
}

/// One entry where a reading's prediction disagrees with the built tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceMismatch {
    level: usize,
    position: usize,
    built: BigUint,
    predicted: BigUint,
}

impl RecurrenceMismatch {
    /// 1-based level of the disagreeing term.
    pub fn level(&self) -> usize {
        self.level
    }

    /// 1-based position within the level.
    pub fn position(&self) -> usize {
        self.position
    }

    /// The term actually in the tree.
    pub fn built(&self) -> &BigUint {
        &self.built
    }

    /// What the recurrence predicts under the reading.
    pub fn predicted(&self) -> &BigUint {
        &self.predicted
    }
}

impl fmt::Display for RecurrenceMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {}, position {}: built {}, recurrence gives {}",
            self.level, self.position, self.built, self.predicted
        )
    }
}

/// Mismatches of the level recurrence against a built tree, one list
/// per candidate reading. Entries a reading cannot evaluate (its
/// phantom refers above the tree's top) are skipped, not failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceReport {
    per_reading: Vec<(RecurrenceReading, Vec<RecurrenceMismatch>)>,
}

impl RecurrenceReport {
    /// Reading/mismatch pairs in [`RecurrenceReading::ALL`] order.
    pub fn per_reading(&self) -> &[(RecurrenceReading, Vec<RecurrenceMismatch>)] {
        &self.per_reading
    }

    /// Mismatches for one reading.
    pub fn mismatches(&self, reading: RecurrenceReading) -> &[RecurrenceMismatch] {
        self.per_reading
            .iter()
            .find(|(r, _)| *r == reading)
            .map(|(_, m)| m.as_slice())
            .expect("every reading is present")
    }

    /// The readings whose checkable entries all matched.
    pub fn passing(&self) -> Vec<RecurrenceReading> {
        self.per_reading
            .iter()
            .filter(|(_, m)| m.is_empty())
            .map(|(r, _)| *r)
            .collect()
    }
}

/// First term of level `x`, or `None` when `x` underflows the tree.
fn first_of(tree: &ZeckTree, x: usize) -> Option<&BigUint> {
    (x >= 1 && x <= tree.num_levels()).then(|| &tree.levels()[x - 1][0])
}

/// Evaluate the level recurrence under every reading in
/// [`RecurrenceReading::ALL`] and report each reading's mismatches.
pub fn recurrence_check(tree: &ZeckTree) -> Result<RecurrenceReport> {
    if tree.num_levels() < 2 {
        return Err(Error::Precondition(
            "the level recurrence needs at least two levels".into(),
        ));
    }
    let mut per_reading = Vec::with_capacity(RecurrenceReading::ALL.len());
    for reading in RecurrenceReading::ALL {
        let mut mismatches = Vec::new();
        for i in 2..=tree.num_levels() {
            for j in 1..=i {
                let built = &tree.levels()[i - 1][j - 1];
                let predicted = if j == 1 {
                    let phantom = match reading {
                        RecurrenceReading::SameLevel => first_of(tree, i),
                        RecurrenceReading::LevelAbove => first_of(tree, i - 1),
                        RecurrenceReading::Split => first_of(tree, i - 2),
                    };
                    phantom.map(|p| p + tree.levels()[i - 2].last().expect("level is non-empty"))
                } else {
                    let phantom = match reading {
                        RecurrenceReading::SameLevel => first_of(tree, i - 1),
                        RecurrenceReading::LevelAbove => first_of(tree, i - 2),
                        RecurrenceReading::Split => first_of(tree, i - 1),
                    };
                    phantom.map(|p| p + &tree.levels()[i - 1][j - 2])
                };
                if let Some(predicted) = predicted {
                    if predicted != *built {
                        mismatches.push(RecurrenceMismatch {
                            level: i,
                            position: j,
                            built: built.clone(),
                            predicted,
                        });
                    }
                }
            }
        }
        per_reading.push((reading, mismatches));
    }
    Ok(RecurrenceReport { per_reading })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels_of(tree: &ZeckTree) -> Vec<Vec<u64>> {
        tree.levels()
            .iter()
            .map(|level| level.iter().map(|t| t.try_into().unwrap()).collect())
            .collect()
    }

    fn six_levels() -> Vec<Vec<u64>> {
        vec![
            vec![1],
            vec![2, 3],
            vec![4, 6, 8],
            vec![10, 14, 18, 22],
            vec![26, 36, 46, 56, 66],
            vec![76, 102, 128, 154, 180, 206],
        ]
    }

    fn tamper(tree: &ZeckTree, i: usize, j: usize) -> ZeckTree {
        let mut levels = tree.levels().to_vec();
        levels[i - 1][j - 1] += 1u32;
        ZeckTree::from_levels(levels).unwrap()
    }

    #[test]
    fn six_level_tree_matches_the_rule() {
        let tree = build_tree(6).unwrap();
        assert_eq!(levels_of(&tree), six_levels());
        assert_eq!(tree.num_levels(), 6);
        assert_eq!(*tree.term(3, 2).unwrap(), BigUint::from(6u32));
        let diagonal: Vec<u64> = tree
            .diagonal()
            .into_iter()
            .map(|d| d.try_into().unwrap())
            .collect();
        assert_eq!(diagonal, [1, 2, 4, 10, 26, 76]);
    }

    #[test]
    fn single_level_tree_is_just_one() {
        let tree = build_tree(1).unwrap();
        assert_eq!(levels_of(&tree), [[1]]);
        assert!(build_tree(0).is_err());
    }

    #[test]
    fn shape_validation_rejects_bad_levels() {
        let one = BigUint::from(1u32);
        let two = BigUint::from(2u32);
        assert!(ZeckTree::from_levels(vec![]).is_err());
        // Level 2 must hold two terms.
        assert!(ZeckTree::from_levels(vec![vec![one.clone()], vec![two.clone()]]).is_err());
        // Reading order must strictly increase.
        assert!(ZeckTree::from_levels(vec![
            vec![two.clone()],
            vec![one.clone(), two.clone()],
        ])
        .is_err());
        assert!(ZeckTree::from_levels(vec![vec![one], vec![two.clone(), two]]).is_err());
    }

    #[test]
    fn diagonal_satisfies_the_involution_recurrence() {
        let tree = build_tree(6).unwrap();
        assert!(telephone_check(&tree).unwrap());
        // 26 = 10 + 4·4 is the level-5 instance.
        assert_eq!(
            *tree.term(5, 1).unwrap(),
            tree.term(4, 1).unwrap() + tree.term(3, 1).unwrap() * 4u32
        );
        // Too few levels to evaluate the recurrence at all.
        let two = build_tree(2).unwrap();
        assert!(telephone_check(&two).is_err());
    }

    #[test]
    fn tampered_diagonal_fails_the_telephone_check() {
        let tree = build_tree(5).unwrap();
        assert!(telephone_check(&tree).unwrap());
        assert!(!telephone_check(&tamper(&tree, 5, 1)).unwrap());
    }

    #[test]
    fn tree_terms_equal_the_growing_bin_construction() {
        for levels in 1..=6 {
            assert!(
                bin_equivalence_check(levels).unwrap(),
                "tree and bin construction diverge at {levels} levels"
            );
        }
    }

    #[test]
    fn only_the_split_reading_explains_the_tree() {
        let tree = build_tree(6).unwrap();
        let report = recurrence_check(&tree).unwrap();
        assert_eq!(report.passing(), [RecurrenceReading::Split]);
        // Reading the phantom as the level's own first term turns every
        // opening entry into `x = x + last-of-previous`, which fails.
        let same: Vec<(usize, usize)> = report
            .mismatches(RecurrenceReading::SameLevel)
            .iter()
            .map(|m| (m.level(), m.position()))
            .collect();
        assert_eq!(same, [(2, 1), (3, 1), (4, 1), (5, 1), (6, 1)]);
        // Reading it one level up happens to fit the first opening but
        // nothing afterwards.
        let above = report.mismatches(RecurrenceReading::LevelAbove);
        assert!(!above.is_empty());
        let first = &above[0];
        assert_eq!((first.level(), first.position()), (3, 1));
        assert_eq!(*first.predicted(), BigUint::from(5u32));
        assert_eq!(*first.built(), BigUint::from(4u32));
    }

    #[test]
    fn two_level_tree_leaves_little_to_check() {
        let tree = build_tree(2).unwrap();
        let report = recurrence_check(&tree).unwrap();
        // Each reading evaluates at most one of the two entries here.
        // The self-referential reading fails its opening entry even now;
        // the other two pass the one entry they can see.
        assert_eq!(
            report.passing(),
            [RecurrenceReading::LevelAbove, RecurrenceReading::Split]
        );
        let same = report.mismatches(RecurrenceReading::SameLevel);
        assert_eq!(same.len(), 1);
        assert_eq!((same[0].level(), same[0].position()), (2, 1));
        let one = build_tree(1).unwrap();
        assert!(recurrence_check(&one).is_err());
    }

    #[test]
    fn tampering_any_term_breaks_every_reading() {
        let tree = build_tree(6).unwrap();
        let tampered = tamper(&tree, 4, 2);
        let report = recurrence_check(&tampered).unwrap();
        for reading in RecurrenceReading::ALL {
            assert!(
                !report.mismatches(reading).is_empty(),
                "reading {reading} missed the tampered term"
            );
        }
        assert!(report.passing().is_empty());
    }

    #[test]
    fn display_renders_one_level_per_line() {
        let tree = build_tree(3).unwrap();
        assert_eq!(tree.to_string(), "  1\n 2 3\n4 6 8");
    }
}
