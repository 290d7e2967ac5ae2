//! m-balanced pairs around a center: two disjoint m-element sets of orders
//! whose intersections with every distance class have equal size. Such a
//! pair admits a distance-preserving bijection, which makes the two sets
//! mutually at-least-as-close to the center.
//!
//! [`construct_balanced_pair`] builds the canonical `(K!/2 - c)`-balanced
//! pair separating two given orders: every interior distance class with an
//! odd size drops one representative, and each pruned class is split in
//! half. Wherever a choice is free, the lexicographically smallest eligible
//! order is taken, so the construction is deterministic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::mahonian::collapse_range_end;
use crate::prefs::{distance_classes, inversion_distance, max_distance, PreferenceRelation};
use crate::{Error, Result};

/// A candidate m-balanced pair `(left, right)` around `center`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedPair {
    pub center: PreferenceRelation,
    pub left: BTreeSet<PreferenceRelation>,
    pub right: BTreeSet<PreferenceRelation>,
    pub m: u64,
}

fn check_dimensions(pair: &BalancedPair) -> Result<()> {
    for relation in pair.left.iter().chain(&pair.right) {
        if relation.k() != pair.center.k() {
            return Err(Error::DimensionMismatch {
                expected: pair.center.k(),
                got: relation.k(),
            });
        }
    }
    Ok(())
}

/// Whether the pair satisfies all three balance conditions: disjointness,
/// cardinality `m` on both sides, and equal per-class intersections.
pub fn is_balanced(pair: &BalancedPair) -> Result<bool> {
    check_dimensions(pair)?;
    if !pair.left.is_disjoint(&pair.right) {
        return Ok(false);
    }
    if pair.left.len() as u64 != pair.m || pair.right.len() as u64 != pair.m {
        return Ok(false);
    }
    let width = max_distance(pair.center.k()) as usize + 1;
    let mut left_histogram = vec![0u64; width];
    let mut right_histogram = vec![0u64; width];
    for relation in &pair.left {
        left_histogram[inversion_distance(relation, &pair.center)? as usize] += 1;
    }
    for relation in &pair.right {
        right_histogram[inversion_distance(relation, &pair.center)? as usize] += 1;
    }
    Ok(left_histogram == right_histogram)
}

/// Builds the `(K!/2 - c)`-balanced pair around `center` that places `r1` on
/// the left and `r2` on the right.
///
/// Neither input may equal the center or its reversal, and they must differ:
/// the split only covers the interior distance classes.
pub fn construct_balanced_pair(
    center: &PreferenceRelation,
    r1: &PreferenceRelation,
    r2: &PreferenceRelation,
) -> Result<BalancedPair> {
    for relation in [r1, r2] {
        if relation.k() != center.k() {
            return Err(Error::DimensionMismatch {
                expected: center.k(),
                got: relation.k(),
            });
        }
    }
    if r1 == r2 {
        return Err(Error::Contract(
            "balanced-pair construction needs two distinct orders".into(),
        ));
    }
    let reversal = center.reversal();
    for (name, relation) in [("r1", r1), ("r2", r2)] {
        if relation == center || *relation == reversal {
            return Err(Error::Contract(format!(
                "{name} must differ from the center and its reversal, got '{relation}'"
            )));
        }
    }

    let table = distance_classes(center)?;
    let d = table.max_distance();
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for k in 1..d {
        let class = table.class(k);
        // odd class: drop the lexicographically smallest member that is
        // neither r1 nor r2
        let dropped: Option<&PreferenceRelation> = if class.len() % 2 == 1 {
            Some(
                class
                    .iter()
                    .find(|rel| *rel != r1 && *rel != r2)
                    .expect("interior odd classes have at least 3 members"),
            )
        } else {
            None
        };
        let pruned: Vec<&PreferenceRelation> =
            class.iter().filter(|rel| Some(*rel) != dropped).collect();
        let half = pruned.len() / 2;

        let mut chosen: Vec<&PreferenceRelation> = Vec::with_capacity(half);
        if pruned.contains(&r1) {
            chosen.push(r1);
        }
        for rel in &pruned {
            if chosen.len() == half {
                break;
            }
            if *rel == r1 || *rel == r2 {
                continue;
            }
            chosen.push(rel);
        }
        for rel in pruned {
            if chosen.contains(&rel) {
                left.insert(rel.clone());
            } else {
                right.insert(rel.clone());
            }
        }
    }

    let m = left.len() as u64;
    debug_assert_eq!(m, right.len() as u64);
    Ok(BalancedPair {
        center: center.clone(),
        left,
        right,
        m,
    })
}

/// The target cardinality of [`construct_balanced_pair`], `K!/2 - c`.
///
/// The interior classes hold `K! - 2` orders; dropping one per odd interior
/// class removes `c' - 2` of them, and the remainder splits in half.
pub fn constructed_pair_size(k: u32) -> Result<u64> {
    collapse_range_end(k)
}

/// A one-to-one map `left -> right` preserving the distance to the center,
/// built class by class in lexicographic order. Fails on unbalanced input.
pub fn distance_preserving_bijection(
    pair: &BalancedPair,
) -> Result<Vec<(PreferenceRelation, PreferenceRelation)>> {
    if !is_balanced(pair)? {
        return Err(Error::Contract(
            "distance-preserving bijection requires a balanced pair".into(),
        ));
    }
    let width = max_distance(pair.center.k()) as usize + 1;
    let mut left_classes: Vec<Vec<&PreferenceRelation>> = vec![Vec::new(); width];
    let mut right_classes: Vec<Vec<&PreferenceRelation>> = vec![Vec::new(); width];
    for relation in &pair.left {
        left_classes[inversion_distance(relation, &pair.center)? as usize].push(relation);
    }
    for relation in &pair.right {
        right_classes[inversion_distance(relation, &pair.center)? as usize].push(relation);
    }
    let mut mapping = Vec::with_capacity(pair.left.len());
    for (lefts, rights) in left_classes.into_iter().zip(right_classes) {
        for (x, y) in lefts.into_iter().zip(rights) {
            mapping.push((x.clone(), y.clone()));
        }
    }
    Ok(mapping)
}
