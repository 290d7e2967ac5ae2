//! Alternatives, preference relations (linear orders), the inversion metric,
//! and profiles with their counting measure.
//!
//! A preference relation over `K` alternatives is stored as a ranking: a
//! permutation of the alternative ids `1..=K`, most-preferred first. The
//! pair-set view (the set of ordered pairs the order contains) is computed on
//! demand via [`PreferenceRelation::pair_set`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Largest K accepted by [`enumerate_relations`]; 10! = 3 628 800 orders is
/// the most a desk-scale run can hold in memory comfortably.
pub const MAX_ENUMERATION_K: u32 = 10;

/// One of the `K` alternatives, identified by an integer id in `1..=K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative(u32);

impl Alternative {
    /// Checked constructor: `1 <= id <= k`.
    pub fn new(id: u32, k: u32) -> Result<Self> {
        if id == 0 || id > k {
            return Err(Error::Contract(format!(
                "alternative id must lie in 1..={k}, got {id}"
            )));
        }
        Ok(Alternative(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Canonical single-token name: `a..z` for ids 1..=26, the decimal id
    /// beyond that.
    pub fn name(self) -> String {
        if (1..=26).contains(&self.0) {
            char::from(b'a' + (self.0 - 1) as u8).to_string()
        } else {
            self.0.to_string()
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Alternative {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

/// A linear order on `K > 2` alternatives, stored most-preferred first.
///
/// Equality, ordering and hashing follow the ranking sequence, so the derived
/// `Ord` is exactly the lexicographic order used by [`enumerate_relations`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PreferenceRelation {
    ranking: Vec<Alternative>,
}

impl PreferenceRelation {
    /// Builds a relation from a ranking, validating that it is a permutation
    /// of `1..=K` with `K > 2`.
    pub fn new(ranking: Vec<Alternative>) -> Result<Self> {
        let k = ranking.len() as u32;
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        let mut seen = vec![false; ranking.len()];
        for alt in &ranking {
            let id = alt.id();
            if id == 0 || id > k {
                return Err(Error::Contract(format!(
                    "ranking entry {id} is outside 1..={k}"
                )));
            }
            if seen[(id - 1) as usize] {
                return Err(Error::Contract(format!(
                    "ranking mentions alternative {} twice",
                    alt.name()
                )));
            }
            seen[(id - 1) as usize] = true;
        }
        Ok(PreferenceRelation { ranking })
    }

    /// Convenience constructor from raw ids, most-preferred first.
    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        Self::new(ids.iter().map(|&id| Alternative(id)).collect())
    }

    /// The identity order `1 > 2 > ... > K`.
    pub fn identity(k: u32) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        Ok(PreferenceRelation {
            ranking: (1..=k).map(Alternative).collect(),
        })
    }

    pub fn k(&self) -> u32 {
        self.ranking.len() as u32
    }

    /// The ranking, most-preferred first.
    pub fn ranking(&self) -> &[Alternative] {
        &self.ranking
    }

    /// The most-preferred alternative.
    pub fn top(&self) -> Alternative {
        self.ranking[0]
    }

    /// 0-based position of each alternative, indexed by `id - 1`.
    pub(crate) fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0usize; self.ranking.len()];
        for (i, alt) in self.ranking.iter().enumerate() {
            pos[(alt.id() - 1) as usize] = i;
        }
        pos
    }

    /// The unique order at maximum inversion distance: the ranking reversed.
    pub fn reversal(&self) -> PreferenceRelation {
        let mut ranking = self.ranking.clone();
        ranking.reverse();
        PreferenceRelation { ranking }
    }

    /// The relation viewed as the set of ordered pairs `(a, b)` with `a`
    /// preferred to `b`.
    pub fn pair_set(&self) -> BTreeSet<(Alternative, Alternative)> {
        let mut pairs = BTreeSet::new();
        for (i, &a) in self.ranking.iter().enumerate() {
            for &b in &self.ranking[i + 1..] {
                pairs.insert((a, b));
            }
        }
        pairs
    }

    /// Applies a relabeling `rho` of the alternatives (given as a permutation
    /// where `rho[id - 1]` is the new id) to this order.
    pub fn relabel(&self, rho: &[u32]) -> Result<PreferenceRelation> {
        if rho.len() != self.ranking.len() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                got: rho.len() as u32,
            });
        }
        let ranking = self
            .ranking
            .iter()
            .map(|alt| Alternative(rho[(alt.id() - 1) as usize]))
            .collect();
        Self::new(ranking)
    }
}

impl fmt::Display for PreferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, alt) in self.ranking.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            f.write_str(&alt.name())?;
        }
        Ok(())
    }
}

impl Serialize for PreferenceRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Maximum inversion distance between two orders on `k` alternatives.
pub fn max_distance(k: u32) -> u32 {
    k * (k - 1) / 2
}

/// Number of unordered alternative pairs on which `p` and `q` disagree.
pub fn inversion_distance(p: &PreferenceRelation, q: &PreferenceRelation) -> Result<u32> {
    if p.k() != q.k() {
        return Err(Error::DimensionMismatch {
            expected: p.k(),
            got: q.k(),
        });
    }
    let pp = p.positions();
    let qp = q.positions();
    let mut disagreements = 0;
    for a in 0..pp.len() {
        for b in a + 1..pp.len() {
            if (pp[a] < pp[b]) != (qp[a] < qp[b]) {
                disagreements += 1;
            }
        }
    }
    Ok(disagreements)
}

/// All `K!` preference relations in lexicographic ranking order.
pub fn enumerate_relations(k: u32) -> Result<Vec<PreferenceRelation>> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    if k > MAX_ENUMERATION_K {
        return Err(Error::Capacity(format!(
            "enumerating all K! orders is supported for K <= {MAX_ENUMERATION_K}, got K={k}"
        )));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k as usize);
    let mut used = vec![false; k as usize];
    fn descend(
        k: u32,
        prefix: &mut Vec<Alternative>,
        used: &mut [bool],
        out: &mut Vec<PreferenceRelation>,
    ) {
        if prefix.len() == k as usize {
            out.push(PreferenceRelation {
                ranking: prefix.clone(),
            });
            return;
        }
        for id in 1..=k {
            if !used[(id - 1) as usize] {
                used[(id - 1) as usize] = true;
                prefix.push(Alternative(id));
                descend(k, prefix, used, out);
                prefix.pop();
                used[(id - 1) as usize] = false;
            }
        }
    }
    descend(k, &mut prefix, &mut used, &mut out);
    Ok(out)
}

/// The partition of all orders into distance classes around a center.
///
/// Class `k` holds exactly the orders at inversion distance `k` from the
/// center, in lexicographic order; its size is the Mahonian number `T(K,k)`.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    center: PreferenceRelation,
    classes: Vec<Vec<PreferenceRelation>>,
}

impl DistanceTable {
    pub fn center(&self) -> &PreferenceRelation {
        &self.center
    }

    /// One entry per distance `0..=K(K-1)/2`.
    pub fn classes(&self) -> &[Vec<PreferenceRelation>] {
        &self.classes
    }

    pub fn class(&self, distance: u32) -> &[PreferenceRelation] {
        &self.classes[distance as usize]
    }

    pub fn max_distance(&self) -> u32 {
        (self.classes.len() - 1) as u32
    }
}

/// Partitions all `K!` orders by inversion distance from `center`.
pub fn distance_classes(center: &PreferenceRelation) -> Result<DistanceTable> {
    let relations = enumerate_relations(center.k())?;
    let mut classes = vec![Vec::new(); (max_distance(center.k()) + 1) as usize];
    for relation in relations {
        let d = inversion_distance(&relation, center)?;
        classes[d as usize].push(relation);
    }
    Ok(DistanceTable {
        center: center.clone(),
        classes,
    })
}

/// A multiset of preference relations held by `n` individuals.
///
/// Only the count of each order matters, so the profile stores a count map
/// and the total `n`; orders with count zero are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    k: u32,
    counts: BTreeMap<PreferenceRelation, u64>,
    n: u64,
}

impl Profile {
    /// Builds a profile over `K` alternatives from `(relation, count)` pairs.
    /// Duplicate relations are summed and zero counts dropped; the result
    /// must describe at least one individual.
    pub fn new(
        k: u32,
        entries: impl IntoIterator<Item = (PreferenceRelation, u64)>,
    ) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        let mut counts: BTreeMap<PreferenceRelation, u64> = BTreeMap::new();
        let mut n: u64 = 0;
        for (relation, count) in entries {
            if relation.k() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: relation.k(),
                });
            }
            if count == 0 {
                continue;
            }
            n = n
                .checked_add(count)
                .ok_or(Error::Overflow("profile size n"))?;
            *counts.entry(relation).or_insert(0) += count;
        }
        if n == 0 {
            return Err(Error::Contract(
                "a profile must contain at least one individual".into(),
            ));
        }
        Ok(Profile { k, counts, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Total number of individuals.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The counting measure of a single order (zero when absent).
    pub fn count_of(&self, relation: &PreferenceRelation) -> u64 {
        self.counts.get(relation).copied().unwrap_or(0)
    }

    /// Iterates over the orders with nonzero count, in lexicographic order.
    pub fn counts(&self) -> impl Iterator<Item = (&PreferenceRelation, u64)> {
        self.counts
            .iter()
            .map(|(relation, &count)| (relation, count))
    }

    /// The counting measure of a set of orders: the sum of member counts.
    pub fn count_set(&self, set: &BTreeSet<PreferenceRelation>) -> Result<u64> {
        let mut total: u64 = 0;
        for relation in set {
            if relation.k() != self.k {
                return Err(Error::DimensionMismatch {
                    expected: self.k,
                    got: relation.k(),
                });
            }
            total = total
                .checked_add(self.count_of(relation))
                .ok_or(Error::Overflow("set count"))?;
        }
        Ok(total)
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = serializer.serialize_struct("Profile", 3)?;
        state.serialize_field("k", &self.k)?;
        state.serialize_field("n", &self.n)?;
        let rendered: BTreeMap<String, u64> = self
            .counts
            .iter()
            .map(|(relation, &count)| (relation.to_string(), count))
            .collect();
        state.serialize_field("counts", &rendered)?;
        state.end()
    }
}

/// Parses `"x1 > x2 > ... > xK"` into a relation over exactly `k`
/// alternatives. Tokens are single letters (`a` is id 1) or decimal ids;
/// whitespace around tokens is ignored.
pub fn parse_relation(text: &str, k: u32) -> Result<PreferenceRelation> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let mut ranking = Vec::new();
    let mut seen = vec![false; k as usize];
    let mut offset = 0usize;
    let segments: Vec<&str> = text.split('>').collect();
    if segments.len() != k as usize {
        return Err(Error::Parse {
            position: text.chars().count().max(1),
            message: format!("expected {k} alternatives, found {}", segments.len()),
        });
    }
    for segment in segments {
        let trimmed = segment.trim();
        let position = offset + leading_ws(segment) + 1;
        if trimmed.is_empty() {
            return Err(Error::Parse {
                position,
                message: "empty alternative token".into(),
            });
        }
        let id = token_to_id(trimmed, k).ok_or_else(|| Error::Parse {
            position,
            message: format!("unknown alternative token '{trimmed}'"),
        })?;
        if seen[(id - 1) as usize] {
            return Err(Error::Parse {
                position,
                message: format!("duplicate alternative '{trimmed}'"),
            });
        }
        seen[(id - 1) as usize] = true;
        ranking.push(Alternative(id));
        offset += segment.chars().count() + 1;
    }
    PreferenceRelation::new(ranking)
}

/// Like [`parse_relation`], inferring `K` from the number of tokens.
pub fn parse_relation_infer(text: &str) -> Result<PreferenceRelation> {
    let k = text.split('>').count() as u32;
    parse_relation(text, k)
}

fn leading_ws(segment: &str) -> usize {
    segment.chars().take_while(|c| c.is_whitespace()).count()
}

fn token_to_id(token: &str, k: u32) -> Option<u32> {
    let mut chars = token.chars();
    if let (Some(c), None) = (chars.next(), chars.clone().next()) {
        if c.is_ascii_lowercase() {
            let id = (c as u32) - ('a' as u32) + 1;
            return (id <= k).then_some(id);
        }
    }
    match token.parse::<u32>() {
        Ok(id) if (1..=k).contains(&id) => Some(id),
        _ => None,
    }
}
