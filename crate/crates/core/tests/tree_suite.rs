//! The triangular tree end to end: an independent representation
//! counter proves uniqueness exhaustively, the diagonal satisfies the
//! telephone recurrence, the level structure follows its gap law, and
//! the whole object coincides with the unit-growth bin construction.

use binseq_core::{
    bin_equivalence_check, build_sequence, build_tree, parse_schedule, recurrence_check,
    telephone_check, verify_exhaustive, RecurrenceReading, ZeckTree, DEFAULT_STATE_CAP,
};
use num_bigint::BigUint;

/// Count the ways to write `x` as a sum of tree terms, at most one per
/// level, with the used levels pairwise at least two apart. A plain
/// exhaustive recursion, independent of the library's membership test.
fn representations(tree: &ZeckTree, highest: usize, x: &BigUint) -> u64 {
    if x.bits() == 0 {
        return 1;
    }
    if highest == 0 {
        return 0;
    }
    let mut ways = representations(tree, highest - 1, x);
    for term in tree.level(highest).unwrap() {
        if term <= x {
            ways += representations(tree, highest.saturating_sub(2), &(x - term));
        }
    }
    ways
}

#[test]
fn every_integer_through_six_levels_is_reached_exactly_once() {
    let tree = build_tree(6).unwrap();
    // Largest reachable sum: last terms of levels 6, 4, and 2.
    let top = BigUint::from(206u32 + 22 + 3);
    let mut x = BigUint::from(1u32);
    while x <= top {
        assert_eq!(representations(&tree, 6, &x), 1, "x={x}");
        x += 1u32;
    }
    // ... and the next integer is out of reach, so it must open level 7.
    assert_eq!(representations(&tree, 6, &x), 0);
    let seven = build_tree(7).unwrap();
    assert_eq!(seven.term(7, 1).unwrap(), &x);
}

#[test]
fn the_uniqueness_engine_agrees_with_the_tree_counter() {
    // Levels are bins of the unit-growth schedule, so the exhaustive
    // verifier must reach the same verdict as the counter above.
    let schedule = parse_schedule("affine:1,0/zero-one/adj:1").unwrap();
    let seq = build_sequence(&schedule, 6, DEFAULT_STATE_CAP).unwrap();
    let report = verify_exhaustive(&seq, 231, 1).unwrap();
    assert!(report.is_unique());
}

#[test]
fn the_diagonal_follows_the_telephone_recurrence() {
    for levels in 3..=7usize {
        let tree = build_tree(levels).unwrap();
        assert!(telephone_check(&tree).unwrap(), "{levels} levels");
    }
    // Spot-check the seventh involution count: 232 = 76 + 6·26.
    let tree = build_tree(7).unwrap();
    assert_eq!(tree.term(7, 1).unwrap(), &BigUint::from(232u32));
}

#[test]
fn levels_are_evenly_spaced_by_the_previous_first_term() {
    let tree = build_tree(7).unwrap();
    for i in 2..=7usize {
        let step = tree.term(i - 1, 1).unwrap();
        let level = tree.level(i).unwrap();
        for pair in level.windows(2) {
            assert_eq!(&(&pair[1] - &pair[0]), step, "level {i}");
        }
    }
    // The opening term of each level is one past the reach of the
    // levels before it, where reach_i = last_i + reach_{i−2} (used
    // levels must sit at least two apart).
    let mut prev2 = BigUint::ZERO;
    let mut prev1 = BigUint::ZERO;
    for i in 1..=7usize {
        assert_eq!(tree.term(i, 1).unwrap(), &(&prev1 + 1u32), "level {i}");
        let reach = tree.level(i).unwrap().last().unwrap() + &prev2;
        prev2 = std::mem::replace(&mut prev1, reach);
    }
}

#[test]
fn the_tree_matches_the_unit_growth_bins_at_every_depth() {
    for levels in 1..=7usize {
        assert!(bin_equivalence_check(levels).unwrap(), "{levels} levels");
    }
}

#[test]
fn only_the_split_reading_survives_deeper_growth() {
    for levels in 3..=7usize {
        let tree = build_tree(levels).unwrap();
        let report = recurrence_check(&tree).unwrap();
        assert_eq!(report.passing(), vec![RecurrenceReading::Split], "{levels} levels");
    }
}
