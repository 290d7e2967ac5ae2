//! Level-r consensus detection.
//!
//! A profile exhibits consensus of level `r` around a center order when
//! (1) for every pair of disjoint r-element sets of orders, the set at least
//! as close to the center never has the smaller count, and (2) at least one
//! strictly-closer pair has a strictly larger count.
//!
//! Two deciders are provided. [`exhibits_level_r_bruteforce`] enumerates
//! every ordered pair of disjoint r-element subsets and applies the
//! definitional injection test; it is the oracle and is budget-guarded.
//! [`exhibits_level_r_fast`] compresses the subset space to pairs of
//! per-distance-class count vectors: closeness depends only on the distance
//! multisets, and extremal count realizations (smallest counts for the left
//! set, largest for the right) decide whether a violating or a strict pair
//! exists. The count-vector space is swept layer by layer over the distance
//! classes under the prefix-dominance and capacity constraints, and
//! witnesses are reconstructed by walking the layers in ascending distance,
//! choosing the lexicographically smallest `(c_k, c'_k)` that attains the
//! optimum; ties between equal-count members of a class are broken by
//! lexicographic order of the relations, so reported witnesses are
//! deterministic.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::closeness::injection_oracle;
use crate::mahonian::{collapse_range_end, max_consensus_level};
use crate::prefs::{distance_classes, enumerate_relations, PreferenceRelation, Profile};
use crate::{Error, Result, REPORT_SCHEMA_VERSION};

/// Default cap on `C(K!, r) * C(K!-r, r)`, the number of ordered subset
/// pairs the brute-force checker will enumerate.
pub const BRUTEFORCE_PAIR_BUDGET: u128 = 5_000_000;

/// Cap on the count-vector sweep table, in cells.
const FAST_TABLE_CELL_BUDGET: u128 = 30_000_000;

const INF: i128 = i128::MAX / 4;
const NEG_INF: i128 = i128::MIN / 4;

/// A pair of per-distance-class count vectors `(c_k, c'_k)`; the compressed
/// form of a pair of disjoint equal-sized sets of orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountVectorPair {
    /// How many members of each distance class the left set takes.
    pub left: Vec<u64>,
    /// How many members of each distance class the right set takes.
    pub right: Vec<u64>,
    /// The common cardinality of both sides.
    pub r: u64,
}

impl CountVectorPair {
    /// Derives the count vectors of two concrete sets around a center.
    pub fn from_sets(
        left: &BTreeSet<PreferenceRelation>,
        right: &BTreeSet<PreferenceRelation>,
        center: &PreferenceRelation,
    ) -> Result<Self> {
        let width = crate::prefs::max_distance(center.k()) as usize + 1;
        let mut l = vec![0u64; width];
        let mut r = vec![0u64; width];
        for relation in left {
            l[crate::prefs::inversion_distance(relation, center)? as usize] += 1;
        }
        for relation in right {
            r[crate::prefs::inversion_distance(relation, center)? as usize] += 1;
        }
        Ok(CountVectorPair {
            left: l,
            right: r,
            r: left.len() as u64,
        })
    }

    /// Both sides sum to `r`.
    pub fn sums_match(&self) -> bool {
        let l: u64 = self.left.iter().sum();
        let r: u64 = self.right.iter().sum();
        l == self.r && r == self.r
    }

    /// `c_k + c'_k <= T(K,k)`: both sides are jointly realizable by disjoint
    /// sets.
    pub fn fits_classes(&self, class_sizes: &[u64]) -> bool {
        self.left.len() == class_sizes.len()
            && self.right.len() == class_sizes.len()
            && self
                .left
                .iter()
                .zip(&self.right)
                .zip(class_sizes)
                .all(|((&c, &c2), &t)| c + c2 <= t)
    }

    /// Prefix dominance: every realization of the left vector is at least as
    /// close to the center as every realization of the right vector.
    pub fn prefix_dominates(&self) -> bool {
        let mut left_sum = 0u64;
        let mut right_sum = 0u64;
        for (&c, &c2) in self.left.iter().zip(&self.right) {
            left_sum += c;
            right_sum += c2;
            if left_sum < right_sum {
                return false;
            }
        }
        true
    }
}

/// A pair of concrete sets violating condition (1): the left set is at least
/// as close to the center, yet has the smaller count.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationWitness {
    pub counts: CountVectorPair,
    pub left: Vec<PreferenceRelation>,
    pub right: Vec<PreferenceRelation>,
    pub mu_left: u64,
    pub mu_right: u64,
}

/// The decision for one consensus level.
#[derive(Debug, Clone, Serialize)]
pub struct LevelVerdict {
    pub r: u64,
    /// Both conditions hold.
    pub holds: bool,
    /// Condition (1): counts respect the weak closeness relation.
    pub respects_closeness: bool,
    /// Condition (2): some strictly-closer pair has strictly larger count.
    pub has_strict_pair: bool,
    /// Populated when condition (1) fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationWitness>,
}

fn validate_level(profile: &Profile, center: &PreferenceRelation, r: u64) -> Result<u64> {
    if profile.k() != center.k() {
        return Err(Error::DimensionMismatch {
            expected: profile.k(),
            got: center.k(),
        });
    }
    let max_level = max_consensus_level(center.k())?;
    if r == 0 || r > max_level {
        return Err(Error::Contract(format!(
            "consensus level r must lie in 1..={max_level}, got {r}"
        )));
    }
    Ok(max_level)
}

fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let mut result: u128 = 1;
    for i in 0..k.min(n - k) {
        result = result
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i + 1) as u128;
    }
    Ok(result)
}

/// Lexicographic combination stepper over `0..n` choose `r`.
struct Combinations {
    indices: Vec<usize>,
    n: usize,
    started: bool,
    done: bool,
}

impl Combinations {
    fn new(n: usize, r: usize) -> Self {
        Combinations {
            indices: (0..r).collect(),
            n,
            started: false,
            done: r > n,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.indices);
        }
        let r = self.indices.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.indices[i] < self.n - r + i {
                break;
            }
        }
        self.indices[i] += 1;
        for j in i + 1..r {
            self.indices[j] = self.indices[j - 1] + 1;
        }
        Some(&self.indices)
    }
}

/// Decides level-r consensus by direct enumeration of every ordered pair of
/// disjoint r-element subsets, testing closeness with the injection oracle.
///
/// Fails with a capacity error when `C(K!, r) * C(K!-r, r)` exceeds
/// [`BRUTEFORCE_PAIR_BUDGET`]; use [`exhibits_level_r_fast`] beyond that.
pub fn exhibits_level_r_bruteforce(
    profile: &Profile,
    center: &PreferenceRelation,
    r: u64,
) -> Result<LevelVerdict> {
    exhibits_level_r_bruteforce_with_budget(profile, center, r, BRUTEFORCE_PAIR_BUDGET)
}

pub fn exhibits_level_r_bruteforce_with_budget(
    profile: &Profile,
    center: &PreferenceRelation,
    r: u64,
    budget: u128,
) -> Result<LevelVerdict> {
    validate_level(profile, center, r)?;
    let relations = enumerate_relations(center.k())?;
    let m = relations.len() as u64;
    let pair_count = binomial(m, r)?
        .checked_mul(binomial(m - r, r)?)
        .ok_or(Error::Overflow("subset pair count"))?;
    if pair_count > budget {
        return Err(Error::Capacity(format!(
            "brute-force enumeration would visit {pair_count} subset pairs (budget {budget}); \
             use exhibits_level_r_fast"
        )));
    }

    let size = r as usize;
    let mut violation: Option<ViolationWitness> = None;
    let mut strict_found = false;

    let mut outer = Combinations::new(relations.len(), size);
    'outer: while let Some(left_idx) = outer.next() {
        let left: BTreeSet<PreferenceRelation> =
            left_idx.iter().map(|&i| relations[i].clone()).collect();
        let complement: Vec<&PreferenceRelation> = relations
            .iter()
            .enumerate()
            .filter(|(i, _)| !left_idx.contains(i))
            .map(|(_, rel)| rel)
            .collect();
        let mu_left = profile.count_set(&left)?;
        let mut inner = Combinations::new(complement.len(), size);
        while let Some(right_idx) = inner.next() {
            let right: BTreeSet<PreferenceRelation> =
                right_idx.iter().map(|&j| complement[j].clone()).collect();
            if injection_oracle(&left, &right, center, false)?.is_none() {
                continue;
            }
            let mu_right = profile.count_set(&right)?;
            if mu_left < mu_right && violation.is_none() {
                violation = Some(ViolationWitness {
                    counts: CountVectorPair::from_sets(&left, &right, center)?,
                    left: left.iter().cloned().collect(),
                    right: right.iter().cloned().collect(),
                    mu_left,
                    mu_right,
                });
            }
            if !strict_found
                && mu_left > mu_right
                && injection_oracle(&left, &right, center, true)?.is_some()
            {
                strict_found = true;
            }
            if violation.is_some() && strict_found {
                break 'outer;
            }
        }
    }

    let respects_closeness = violation.is_none();
    Ok(LevelVerdict {
        r,
        holds: respects_closeness && strict_found,
        respects_closeness,
        has_strict_pair: strict_found,
        violation,
    })
}

/// Per-distance-class counting data for one (profile, center) pair.
struct MuClasses {
    /// Members of each class with their counts, sorted by (count, relation).
    members: Vec<Vec<(PreferenceRelation, u64)>>,
    /// `small[k][j]`: total count of the `j` smallest-count members of class k.
    small: Vec<Vec<u64>>,
    /// `large[k][j]`: total count of the `j` largest-count members of class k.
    large: Vec<Vec<u64>>,
}

impl MuClasses {
    fn build(profile: &Profile, center: &PreferenceRelation) -> Result<Self> {
        let table = distance_classes(center)?;
        let mut members = Vec::with_capacity(table.classes().len());
        let mut small = Vec::with_capacity(table.classes().len());
        let mut large = Vec::with_capacity(table.classes().len());
        for class in table.classes() {
            let mut entries: Vec<(PreferenceRelation, u64)> = class
                .iter()
                .map(|relation| (relation.clone(), profile.count_of(relation)))
                .collect();
            entries.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
            let mut prefix = Vec::with_capacity(entries.len() + 1);
            prefix.push(0u64);
            for (_, count) in &entries {
                prefix.push(prefix.last().unwrap() + count);
            }
            let total = *prefix.last().unwrap();
            let suffix: Vec<u64> = (0..=entries.len())
                .map(|j| total - prefix[entries.len() - j])
                .collect();
            members.push(entries);
            small.push(prefix);
            large.push(suffix);
        }
        Ok(MuClasses {
            members,
            small,
            large,
        })
    }

    fn class_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

/// Suffix tables for the count-vector sweep. `table[k][s][s']` covers classes
/// `k..`, entered with `s` left picks and `s'` right picks so far; only
/// states with `s >= s'` (prefix dominance) are reachable.
fn sweep_condition1(classes: &MuClasses, r: usize) -> Vec<Vec<i128>> {
    let sizes = classes.class_sizes();
    let layers = sizes.len();
    let width = r + 1;
    let mut tables = vec![vec![INF; width * width]; layers + 1];
    tables[layers][r * width + r] = 0;
    for k in (0..layers).rev() {
        let t_k = sizes[k];
        for s in 0..width {
            for s2 in 0..=s {
                let mut best = INF;
                for c in 0..=t_k.min(r - s) {
                    for c2 in 0..=(t_k - c).min(r - s2) {
                        if s + c < s2 + c2 {
                            continue;
                        }
                        let child = tables[k + 1][(s + c) * width + (s2 + c2)];
                        if child >= INF {
                            continue;
                        }
                        let value =
                            classes.small[k][c] as i128 - classes.large[k][c2] as i128 + child;
                        best = best.min(value);
                    }
                }
                tables[k][s * width + s2] = best;
            }
        }
    }
    tables
}

fn sweep_condition2(classes: &MuClasses, r: usize) -> Vec<Vec<i128>> {
    let sizes = classes.class_sizes();
    let layers = sizes.len();
    let width = r + 1;
    // two planes per layer: [needs_differ][s][s']
    let plane = width * width;
    let mut tables = vec![vec![NEG_INF; 2 * plane]; layers + 1];
    tables[layers][r * width + r] = 0; // needs_differ == 0 satisfied at the end
    for k in (0..layers).rev() {
        let t_k = sizes[k];
        for s in 0..width {
            for s2 in 0..=s {
                for needs in 0..2 {
                    let mut best = NEG_INF;
                    for c in 0..=t_k.min(r - s) {
                        for c2 in 0..=(t_k - c).min(r - s2) {
                            if s + c < s2 + c2 {
                                continue;
                            }
                            let child_needs = if needs == 1 && c == c2 { 1 } else { 0 };
                            let child =
                                tables[k + 1][child_needs * plane + (s + c) * width + (s2 + c2)];
                            if child <= NEG_INF {
                                continue;
                            }
                            let value =
                                classes.large[k][c] as i128 - classes.small[k][c2] as i128 + child;
                            best = best.max(value);
                        }
                    }
                    tables[k][needs * plane + s * width + s2] = best;
                }
            }
        }
    }
    tables
}

/// Reconstructs the first (in class order, then lexicographic `(c, c')`
/// order) count-vector pair attaining the minimal count gap, and
/// materializes it: the left set takes the smallest-count members of each
/// class, the right set the largest-count members.
fn materialize_min_witness(
    classes: &MuClasses,
    tables: &[Vec<i128>],
    r: usize,
) -> ViolationWitness {
    let sizes = classes.class_sizes();
    let width = r + 1;
    let mut s = 0usize;
    let mut s2 = 0usize;
    let mut left_counts = Vec::with_capacity(sizes.len());
    let mut right_counts = Vec::with_capacity(sizes.len());
    for (k, &t_k) in sizes.iter().enumerate() {
        let target = tables[k][s * width + s2];
        let mut chosen = None;
        'search: for c in 0..=t_k.min(r - s) {
            for c2 in 0..=(t_k - c).min(r - s2) {
                if s + c < s2 + c2 {
                    continue;
                }
                let child = tables[k + 1][(s + c) * width + (s2 + c2)];
                if child >= INF {
                    continue;
                }
                let value = classes.small[k][c] as i128 - classes.large[k][c2] as i128 + child;
                if value == target {
                    chosen = Some((c, c2));
                    break 'search;
                }
            }
        }
        let (c, c2) = chosen.expect("optimal sweep value must be attainable");
        left_counts.push(c as u64);
        right_counts.push(c2 as u64);
        s += c;
        s2 += c2;
    }

    let mut left = Vec::with_capacity(r);
    let mut right = Vec::with_capacity(r);
    let mut mu_left = 0u64;
    let mut mu_right = 0u64;
    for (k, members) in classes.members.iter().enumerate() {
        let c = left_counts[k] as usize;
        let c2 = right_counts[k] as usize;
        for (relation, count) in &members[..c] {
            left.push(relation.clone());
            mu_left += count;
        }
        for (relation, count) in &members[members.len() - c2..] {
            right.push(relation.clone());
            mu_right += count;
        }
    }
    left.sort();
    right.sort();
    ViolationWitness {
        counts: CountVectorPair {
            left: left_counts,
            right: right_counts,
            r: r as u64,
        },
        left,
        right,
        mu_left,
        mu_right,
    }
}

/// Decides level-r consensus through the count-vector compression. Produces
/// the same verdict as [`exhibits_level_r_bruteforce`].
pub fn exhibits_level_r_fast(
    profile: &Profile,
    center: &PreferenceRelation,
    r: u64,
) -> Result<LevelVerdict> {
    validate_level(profile, center, r)?;
    let width = (crate::prefs::max_distance(center.k()) + 2) as u128;
    let cells = width * (r as u128 + 1) * (r as u128 + 1);
    if cells > FAST_TABLE_CELL_BUDGET {
        return Err(Error::Capacity(format!(
            "count-vector sweep needs {cells} table cells (budget {FAST_TABLE_CELL_BUDGET})"
        )));
    }
    let classes = MuClasses::build(profile, center)?;
    let size = r as usize;

    let tables1 = sweep_condition1(&classes, size);
    let min_gap = tables1[0][0];
    let respects_closeness = min_gap >= 0;
    let violation = if respects_closeness {
        None
    } else {
        Some(materialize_min_witness(&classes, &tables1, size))
    };

    let tables2 = sweep_condition2(&classes, size);
    let plane = (size + 1) * (size + 1);
    let has_strict_pair = tables2[0][plane] > 0;

    Ok(LevelVerdict {
        r,
        holds: respects_closeness && has_strict_pair,
        respects_closeness,
        has_strict_pair,
        violation,
    })
}

/// Whether the profile's counting measure is a nonincreasing, nonconstant
/// function of the distance from `center` (constant within each distance
/// class). Exactly the profiles exhibiting level-1 consensus.
pub fn level1_characterization(profile: &Profile, center: &PreferenceRelation) -> Result<bool> {
    if profile.k() != center.k() {
        return Err(Error::DimensionMismatch {
            expected: profile.k(),
            got: center.k(),
        });
    }
    let table = distance_classes(center)?;
    let mut previous: Option<u64> = None;
    let mut constant = true;
    for class in table.classes() {
        let value = profile.count_of(&class[0]);
        for member in class {
            if profile.count_of(member) != value {
                return Ok(false);
            }
        }
        if let Some(prev) = previous {
            if value > prev {
                return Ok(false);
            }
            if value != prev {
                constant = false;
            }
        }
        previous = Some(value);
    }
    Ok(!constant)
}

/// How a spectrum entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluation {
    Evaluated,
    CopiedFromLevel1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMode {
    /// Evaluate every level independently (the default).
    Independent,
    /// Evaluate level 1, copy its verdict across the collapsed range
    /// `1..=K!/2 - c`, and evaluate the tail explicitly.
    CollapseShortcut,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub r: u64,
    pub holds: bool,
    pub evaluation: Evaluation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<LevelVerdict>,
}

/// Per-level verdicts for a profile/center pair.
#[derive(Debug, Clone, Serialize)]
pub struct ConsensusReport {
    pub schema_version: &'static str,
    pub k: u32,
    pub center: PreferenceRelation,
    pub mode: SpectrumMode,
    pub max_level: u64,
    pub collapse_range_end: u64,
    pub min_level: Option<u64>,
    pub levels: Vec<SpectrumEntry>,
}

/// Evaluates the consensus verdict for every level `r = 1..=K!/2`.
pub fn consensus_spectrum(
    profile: &Profile,
    center: &PreferenceRelation,
    mode: SpectrumMode,
) -> Result<ConsensusReport> {
    let max_level = validate_level(profile, center, 1)?;
    let range_end = collapse_range_end(center.k())?;
    let first = exhibits_level_r_fast(profile, center, 1)?;

    let evaluated: Vec<u64> = match mode {
        SpectrumMode::Independent => (2..=max_level).collect(),
        SpectrumMode::CollapseShortcut => (range_end + 1..=max_level).collect(),
    };
    let verdicts: Vec<LevelVerdict> = evaluated
        .par_iter()
        .map(|&r| exhibits_level_r_fast(profile, center, r))
        .collect::<Result<_>>()?;

    let mut levels = Vec::with_capacity(max_level as usize);
    levels.push(SpectrumEntry {
        r: 1,
        holds: first.holds,
        evaluation: Evaluation::Evaluated,
        detail: Some(first.clone()),
    });
    if mode == SpectrumMode::CollapseShortcut {
        for r in 2..=range_end {
            levels.push(SpectrumEntry {
                r,
                holds: first.holds,
                evaluation: Evaluation::CopiedFromLevel1,
                detail: None,
            });
        }
    }
    for verdict in verdicts {
        levels.push(SpectrumEntry {
            r: verdict.r,
            holds: verdict.holds,
            evaluation: Evaluation::Evaluated,
            detail: Some(verdict),
        });
    }
    levels.sort_by_key(|entry| entry.r);
    let min_level = levels.iter().find(|entry| entry.holds).map(|entry| entry.r);

    Ok(ConsensusReport {
        schema_version: REPORT_SCHEMA_VERSION,
        k: center.k(),
        center: center.clone(),
        mode,
        max_level,
        collapse_range_end: range_end,
        min_level,
        levels,
    })
}
