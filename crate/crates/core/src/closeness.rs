//! Set closeness around a center order: `C` is at least as close to the
//! center as `C'` when some injection `phi: C -> C'` never increases the
//! distance to the center; closer-than additionally needs one strict drop.
//!
//! The decision procedure sorts both distance vectors ascending and checks
//! componentwise dominance, pairing elements in that order as the witness.
//! [`injection_oracle`] decides the same statement by exhaustive search over
//! injections; it exists so the dominance path can be checked against a
//! direct reading of the definition, and is guarded to small sets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::prefs::{inversion_distance, PreferenceRelation};
use crate::{Error, Result};

/// Size guard for the exhaustive injection search.
pub const INJECTION_ORACLE_MAX_SIZE: usize = 8;

/// A one-to-one map certifying a closeness relation, stored as `(x, phi(x))`
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosenessWitness {
    pairs: Vec<(PreferenceRelation, PreferenceRelation)>,
    strict: bool,
}

impl ClosenessWitness {
    /// The matched pairs `(x, phi(x))`.
    pub fn pairs(&self) -> &[(PreferenceRelation, PreferenceRelation)] {
        &self.pairs
    }

    /// Whether this witness certifies the strict relation.
    pub fn strict(&self) -> bool {
        self.strict
    }

    /// Re-checks the defining inequalities of the witness against a center:
    /// injectivity on both sides, `d(x) <= d(phi(x))` everywhere, and a
    /// strict slot when the witness claims strictness.
    pub fn verify(&self, center: &PreferenceRelation) -> Result<()> {
        let mut domain = BTreeSet::new();
        let mut codomain = BTreeSet::new();
        let mut has_strict = false;
        for (x, y) in &self.pairs {
            if !domain.insert(x.clone()) {
                return Err(Error::Contract(format!("witness maps '{x}' twice")));
            }
            if !codomain.insert(y.clone()) {
                return Err(Error::Contract(format!("witness targets '{y}' twice")));
            }
            let dx = inversion_distance(x, center)?;
            let dy = inversion_distance(y, center)?;
            if dx > dy {
                return Err(Error::Contract(format!(
                    "witness pair ('{x}', '{y}') increases distance {dx} -> {dy}"
                )));
            }
            has_strict |= dx < dy;
        }
        if self.strict && !has_strict {
            return Err(Error::Contract(
                "strict witness has no strictly decreasing pair".into(),
            ));
        }
        Ok(())
    }
}

fn validate_inputs(
    left: &BTreeSet<PreferenceRelation>,
    right: &BTreeSet<PreferenceRelation>,
    center: &PreferenceRelation,
) -> Result<()> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::Contract("closeness requires nonempty sets".into()));
    }
    if left.len() != right.len() {
        return Err(Error::Contract(format!(
            "closeness requires equal cardinalities, got {} and {}",
            left.len(),
            right.len()
        )));
    }
    if !left.is_disjoint(right) {
        return Err(Error::Contract("closeness requires disjoint sets".into()));
    }
    for relation in left.iter().chain(right) {
        if relation.k() != center.k() {
            return Err(Error::DimensionMismatch {
                expected: center.k(),
                got: relation.k(),
            });
        }
    }
    Ok(())
}

/// Members with distances, sorted by (distance, relation) ascending.
fn sorted_by_distance<'a>(
    set: &'a BTreeSet<PreferenceRelation>,
    center: &PreferenceRelation,
) -> Result<Vec<(u32, &'a PreferenceRelation)>> {
    let mut out = Vec::with_capacity(set.len());
    for relation in set {
        out.push((inversion_distance(relation, center)?, relation));
    }
    out.sort();
    Ok(out)
}

fn dominance_witness(
    left: &BTreeSet<PreferenceRelation>,
    right: &BTreeSet<PreferenceRelation>,
    center: &PreferenceRelation,
    strict: bool,
) -> Result<Option<ClosenessWitness>> {
    validate_inputs(left, right, center)?;
    let left_sorted = sorted_by_distance(left, center)?;
    let right_sorted = sorted_by_distance(right, center)?;
    let mut any_strict = false;
    for ((dl, _), (dr, _)) in left_sorted.iter().zip(&right_sorted) {
        if dl > dr {
            return Ok(None);
        }
        any_strict |= dl < dr;
    }
    if strict && !any_strict {
        return Ok(None);
    }
    let pairs = left_sorted
        .into_iter()
        .zip(right_sorted)
        .map(|((_, x), (_, y))| (x.clone(), y.clone()))
        .collect();
    Ok(Some(ClosenessWitness { pairs, strict }))
}

/// Decides whether `left` is at least as close to `center` as `right`,
/// returning the sorted-order pairing as a witness when it is.
pub fn at_least_as_close(
    left: &BTreeSet<PreferenceRelation>,
    right: &BTreeSet<PreferenceRelation>,
    center: &PreferenceRelation,
) -> Result<Option<ClosenessWitness>> {
    dominance_witness(left, right, center, false)
}

/// Decides whether `left` is closer than `right` to `center`: dominance with
/// at least one strictly smaller slot (equivalently, the two sorted distance
/// vectors differ).
pub fn closer_than(
    left: &BTreeSet<PreferenceRelation>,
    right: &BTreeSet<PreferenceRelation>,
    center: &PreferenceRelation,
) -> Result<Option<ClosenessWitness>> {
    dominance_witness(left, right, center, true)
}

/// Exhaustive search for an injection `phi: left -> right` that never
/// increases distance to `center` (with one strict decrease when `strict`).
///
/// Used as a test oracle for the dominance decision; guarded to sets of at
/// most [`INJECTION_ORACLE_MAX_SIZE`] elements.
pub fn injection_oracle(
    left: &BTreeSet<PreferenceRelation>,
    right: &BTreeSet<PreferenceRelation>,
    center: &PreferenceRelation,
    strict: bool,
) -> Result<Option<ClosenessWitness>> {
    validate_inputs(left, right, center)?;
    if left.len() > INJECTION_ORACLE_MAX_SIZE {
        return Err(Error::Capacity(format!(
            "injection oracle supports sets of at most {INJECTION_ORACLE_MAX_SIZE} orders, got {}",
            left.len()
        )));
    }
    let domain: Vec<&PreferenceRelation> = left.iter().collect();
    let targets: Vec<&PreferenceRelation> = right.iter().collect();
    let d_dom: Vec<u32> = domain
        .iter()
        .map(|r| inversion_distance(r, center))
        .collect::<Result<_>>()?;
    let d_tgt: Vec<u32> = targets
        .iter()
        .map(|r| inversion_distance(r, center))
        .collect::<Result<_>>()?;

    fn search(
        i: usize,
        strict_needed: bool,
        used: &mut [bool],
        assignment: &mut Vec<usize>,
        d_dom: &[u32],
        d_tgt: &[u32],
    ) -> bool {
        if i == d_dom.len() {
            return !strict_needed;
        }
        for j in 0..d_tgt.len() {
            if used[j] || d_dom[i] > d_tgt[j] {
                continue;
            }
            used[j] = true;
            assignment.push(j);
            let still_needed = strict_needed && d_dom[i] == d_tgt[j];
            if search(i + 1, still_needed, used, assignment, d_dom, d_tgt) {
                return true;
            }
            assignment.pop();
            used[j] = false;
        }
        false
    }

    let mut used = vec![false; targets.len()];
    let mut assignment = Vec::with_capacity(domain.len());
    if !search(0, strict, &mut used, &mut assignment, &d_dom, &d_tgt) {
        return Ok(None);
    }
    let pairs = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| (domain[i].clone(), targets[j].clone()))
        .collect();
    Ok(Some(ClosenessWitness { pairs, strict }))
}
