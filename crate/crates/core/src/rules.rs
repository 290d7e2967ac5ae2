//! Scoring rules, the pairwise majority relation, and Condorcet winners.
//!
//! Scores are exact rationals so that argmax sets are reproducible; winners
//! of a scoring rule are invariant under positive affine transformations of
//! the score vector.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::prefs::{Alternative, PreferenceRelation, Profile};
use crate::{Error, Result};

/// An exact rational score.
pub type Score = Ratio<i64>;

/// A nonincreasing vector of nonnegative rank scores with `S_1 > S_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreVector {
    scores: Vec<Score>,
}

impl ScoreVector {
    pub fn new(scores: Vec<Score>) -> Result<Self> {
        if scores.len() < 3 {
            return Err(Error::InvalidK(scores.len() as u32));
        }
        if scores.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Contract("scores must be nonincreasing".into()));
        }
        if scores.first() <= scores.last() {
            return Err(Error::Contract(
                "the first score must exceed the last".into(),
            ));
        }
        if scores.iter().any(|s| *s < Score::from_integer(0)) {
            return Err(Error::Contract("scores must be nonnegative".into()));
        }
        Ok(ScoreVector { scores })
    }

    /// `(K-1, K-2, ..., 0)`.
    pub fn borda(k: u32) -> Result<Self> {
        Self::new(
            (0..k)
                .rev()
                .map(|s| Score::from_integer(s as i64))
                .collect(),
        )
    }

    /// `(1, 0, ..., 0)`.
    pub fn plurality(k: u32) -> Result<Self> {
        let mut scores = vec![Score::from_integer(0); k as usize];
        scores[0] = Score::from_integer(1);
        Self::new(scores)
    }

    /// `(1, ..., 1, 0)`.
    pub fn antiplurality(k: u32) -> Result<Self> {
        let mut scores = vec![Score::from_integer(1); k as usize];
        *scores.last_mut().unwrap() = Score::from_integer(0);
        Self::new(scores)
    }

    /// A random valid score vector with small rational entries; rejection
    /// sampling enforces `S_1 > S_K`.
    pub fn random<R: Rng>(k: u32, rng: &mut R) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        loop {
            let mut scores: Vec<Score> = (0..k)
                .map(|_| Score::new(rng.random_range(0..=24), rng.random_range(1..=8)))
                .collect();
            scores.sort_by(|a, b| b.cmp(a));
            if scores.first() > scores.last() {
                return Self::new(scores);
            }
        }
    }

    pub fn scores(&self) -> &[Score] {
        &self.scores
    }

    pub fn k(&self) -> u32 {
        self.scores.len() as u32
    }
}

/// Total score of every alternative under the rank scores `s`.
pub fn scoring_totals(profile: &Profile, s: &ScoreVector) -> Result<BTreeMap<Alternative, Score>> {
    if s.k() != profile.k() {
        return Err(Error::DimensionMismatch {
            expected: profile.k(),
            got: s.k(),
        });
    }
    let mut totals: BTreeMap<Alternative, Score> = (1..=profile.k())
        .map(|id| {
            (
                Alternative::new(id, profile.k()).expect("id in range"),
                Score::from_integer(0),
            )
        })
        .collect();
    for (relation, count) in profile.counts() {
        let weight =
            Score::from_integer(i64::try_from(count).map_err(|_| Error::Overflow("score weight"))?);
        for (position, alternative) in relation.ranking().iter().enumerate() {
            let entry = totals.get_mut(alternative).expect("alternative in range");
            *entry += s.scores()[position] * weight;
        }
    }
    Ok(totals)
}

/// The set of alternatives with the maximum total score; never empty.
pub fn scoring_winners(profile: &Profile, s: &ScoreVector) -> Result<BTreeSet<Alternative>> {
    let totals = scoring_totals(profile, s)?;
    let best = totals.values().max().cloned().expect("K >= 3 alternatives");
    Ok(totals
        .into_iter()
        .filter(|(_, total)| *total == best)
        .map(|(alternative, _)| alternative)
        .collect())
}

/// The strict pairwise-majority relation of a profile: `(a, b)` is present
/// when strictly more individuals rank `a` above `b` than `b` above `a`.
/// Ties leave both directions absent, so the relation need not be complete,
/// and it need not be transitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MajorityRelation {
    k: u32,
    /// `tallies[a-1][b-1]`: individuals ranking `a` above `b`.
    tallies: Vec<Vec<u64>>,
    pairs: BTreeSet<(Alternative, Alternative)>,
}

impl MajorityRelation {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tallies(&self) -> &[Vec<u64>] {
        &self.tallies
    }

    pub fn pairs(&self) -> &BTreeSet<(Alternative, Alternative)> {
        &self.pairs
    }

    /// Every unordered pair is decided one way or the other.
    pub fn is_complete(&self) -> bool {
        let expected = (self.k as usize) * (self.k as usize - 1) / 2;
        self.pairs.len() == expected
    }

    pub fn is_transitive(&self) -> bool {
        for &(a, b) in &self.pairs {
            for &(b2, c) in &self.pairs {
                if b == b2 && !self.pairs.contains(&(a, c)) && a != c {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the relation coincides exactly with a linear order.
    pub fn matches_linear_order(&self, relation: &PreferenceRelation) -> bool {
        relation.k() == self.k && self.pairs == relation.pair_set()
    }
}

/// Computes the majority relation of a profile.
pub fn majority_relation(profile: &Profile) -> MajorityRelation {
    let k = profile.k() as usize;
    let mut tallies = vec![vec![0u64; k]; k];
    for (relation, count) in profile.counts() {
        let positions = relation.positions();
        for a in 0..k {
            for b in 0..k {
                if a != b && positions[a] < positions[b] {
                    tallies[a][b] += count;
                }
            }
        }
    }
    let mut pairs = BTreeSet::new();
    let alternative = |id: usize| Alternative::new(id as u32 + 1, k as u32).expect("in range");
    // tallies is accessed symmetrically, so index loops stay clearer here
    #[allow(clippy::needless_range_loop)]
    for a in 0..k {
        for b in a + 1..k {
            if tallies[a][b] > tallies[b][a] {
                pairs.insert((alternative(a), alternative(b)));
            } else if tallies[b][a] > tallies[a][b] {
                pairs.insert((alternative(b), alternative(a)));
            }
        }
    }
    MajorityRelation {
        k: k as u32,
        tallies,
        pairs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CondorcetMode {
    /// The winner must beat every other alternative strictly.
    Strict,
    /// The winner must lose no pairwise comparison; ties are allowed.
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondorcetOutcome {
    pub mode: CondorcetMode,
    /// All alternatives meeting the mode's requirement.
    pub qualifiers: BTreeSet<Alternative>,
    /// The qualifier with the smallest id, if any.
    pub winner: Option<Alternative>,
    /// Set when several alternatives qualified and the id tie-break picked
    /// one (only possible in weak mode).
    pub tie_break_applied: bool,
}

/// Finds the Condorcet winner of a profile under the requested mode.
pub fn condorcet_winner(profile: &Profile, mode: CondorcetMode) -> CondorcetOutcome {
    let majority = majority_relation(profile);
    let k = profile.k();
    let qualifiers: BTreeSet<Alternative> = (1..=k)
        .filter_map(|id| {
            let a = Alternative::new(id, k).expect("in range");
            let qualifies = (1..=k).all(|other| {
                if other == id {
                    return true;
                }
                let b = Alternative::new(other, k).expect("in range");
                match mode {
                    CondorcetMode::Strict => majority.pairs().contains(&(a, b)),
                    CondorcetMode::Weak => !majority.pairs().contains(&(b, a)),
                }
            });
            qualifies.then_some(a)
        })
        .collect();
    let winner = qualifiers.first().copied();
    CondorcetOutcome {
        mode,
        winner,
        tie_break_applied: qualifiers.len() > 1,
        qualifiers,
    }
}
