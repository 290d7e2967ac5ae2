//! The verification campaigns behind `consensus-lab verify ...` and `gen`.
//!
//! Exhaustive campaigns enumerate profiles as count vectors over the `K!`
//! orders with the center fixed to the identity order (the metric is
//! relabeling-invariant, which the test suite checks rather than assumes;
//! a cross-check mode sweeps every center at small n). Sampled campaigns
//! draw seeded profiles, so reports are reproducible byte for byte.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{CampaignCase, CampaignParameters, CampaignReport};
use crate::consensus::{
    exhibits_level_r_bruteforce, exhibits_level_r_fast, level1_characterization,
};
use crate::mahonian::{collapse_range_end, max_consensus_level};
use crate::prefs::{
    distance_classes, enumerate_relations, inversion_distance, PreferenceRelation, Profile,
};
use crate::rules::{
    condorcet_winner, majority_relation, scoring_winners, CondorcetMode, ScoreVector,
};
use crate::{Error, Result};

/// Profile draws used by the sampled scoring campaign when no explicit
/// count is given.
pub const DEFAULT_SCORING_PROFILE_SAMPLES: u64 = 500;

/// Distinct r values checked per profile by the sampled collapse campaign.
const SAMPLED_R_VALUES_PER_PROFILE: usize = 8;

fn for_each_count_vector(total: u64, parts: usize, f: &mut impl FnMut(&[u64])) {
    fn descend(
        remaining: u64,
        cells_left: usize,
        current: &mut Vec<u64>,
        f: &mut impl FnMut(&[u64]),
    ) {
        if cells_left == 1 {
            current.push(remaining);
            f(current);
            current.pop();
            return;
        }
        for value in 0..=remaining {
            current.push(value);
            descend(remaining - value, cells_left - 1, current, f);
            current.pop();
        }
    }
    let mut current = Vec::with_capacity(parts);
    descend(total, parts, &mut current, f);
}

/// Every profile over the `K!` orders with `1 <= n <= n_max`.
fn composition_profiles(k: u32, n_max: u64) -> Result<Vec<Profile>> {
    let relations = enumerate_relations(k)?;
    let mut profiles = Vec::new();
    for n in 1..=n_max {
        for_each_count_vector(n, relations.len(), &mut |counts| {
            let profile = Profile::new(k, relations.iter().cloned().zip(counts.iter().copied()))
                .expect("enumerated count vectors are valid profiles");
            profiles.push(profile);
        });
    }
    Ok(profiles)
}

/// Uniformly random count vector of `parts` nonnegative cells summing to
/// `n` (stars and bars).
fn sample_count_vector(n: u64, parts: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let slots = n as usize + parts - 1;
    let bars = parts - 1;
    let mut indices: Vec<usize> = (0..slots).collect();
    for j in 0..bars {
        let pick = rng.random_range(j..slots);
        indices.swap(j, pick);
    }
    let mut bar_positions = indices[..bars].to_vec();
    bar_positions.sort_unstable();
    let mut counts = Vec::with_capacity(parts);
    let mut previous = 0usize;
    for &bar in &bar_positions {
        counts.push((bar - previous) as u64);
        previous = bar + 1;
    }
    counts.push((slots - previous) as u64);
    counts
}

/// Draws `n` orders independently with probability proportional to
/// `theta^d(order, center)`; `theta = 1` is the uniform distribution.
pub fn generate_profile(
    center: &PreferenceRelation,
    theta: f64,
    n: u64,
    seed: u64,
) -> Result<Profile> {
    if !theta.is_finite() || theta <= 0.0 || theta > 1.0 {
        return Err(Error::Contract(format!(
            "theta must lie in (0, 1], got {theta}"
        )));
    }
    if n == 0 {
        return Err(Error::Contract("n must be at least 1".into()));
    }
    let relations = enumerate_relations(center.k())?;
    let mut cumulative = Vec::with_capacity(relations.len());
    let mut total = 0.0f64;
    for relation in &relations {
        let d = inversion_distance(relation, center)?;
        total += theta.powi(d as i32);
        cumulative.push(total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; relations.len()];
    for _ in 0..n {
        let x: f64 = rng.random::<f64>() * total;
        let index = cumulative
            .partition_point(|&c| c <= x)
            .min(relations.len() - 1);
        counts[index] += 1;
    }
    Profile::new(center.k(), relations.into_iter().zip(counts))
}

/// Re-checks the collapse equivalence `verdict(r) = verdict(1)` for every
/// `r` in the collapsed range, on every profile with `1 <= n <= n_max`,
/// with every level evaluated independently. Guarded to K = 3.
pub fn verify_collapse_exhaustive(k: u32, n_max: u64, all_centers: bool) -> Result<CampaignReport> {
    let start = Instant::now();
    if k != 3 {
        return Err(Error::Capacity(format!(
            "exhaustive collapse verification is guarded to K = 3 (got K = {k}); \
             use verify_collapse_sampled"
        )));
    }
    let range_end = collapse_range_end(k)?;
    let mut report = CampaignReport::new(
        "collapse-exhaustive",
        CampaignParameters {
            k,
            n_max: Some(n_max),
            r_max: Some(range_end),
            all_centers,
            ..Default::default()
        },
    );
    let centers = if all_centers {
        enumerate_relations(k)?
    } else {
        vec![PreferenceRelation::identity(k)?]
    };
    let profiles = composition_profiles(k, n_max)?;
    for center in &centers {
        let verdicts: Vec<Vec<(u64, bool)>> = profiles
            .par_iter()
            .map(|profile| {
                (1..=range_end)
                    .map(|r| Ok((r, exhibits_level_r_fast(profile, center, r)?.holds)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for (profile, levels) in profiles.iter().zip(verdicts) {
            report.profiles_examined += 1;
            report.checks_performed += levels.len() as u64;
            let base = levels[0].1;
            for (r, holds) in levels {
                if holds != base {
                    report.violations.push(CampaignCase::new(
                        center,
                        profile,
                        Some(r),
                        format!("verdict({r})={holds} but verdict(1)={base}"),
                    ));
                }
            }
        }
    }
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn sample_r_values(rng: &mut ChaCha8Rng, range_end: u64) -> Vec<u64> {
    let mut candidates: Vec<u64> = (2..=range_end).collect();
    let take = candidates.len().min(SAMPLED_R_VALUES_PER_PROFILE);
    for j in 0..take {
        let pick = rng.random_range(j..candidates.len());
        candidates.swap(j, pick);
    }
    let mut out = candidates[..take].to_vec();
    out.sort_unstable();
    out
}

/// Sampled collapse check for K = 4 or 5: seeded random profiles (uniform
/// count vectors alternating with distance-decay draws), a seeded sample of
/// levels `r <= K!/2 - c` each, all evaluated independently.
pub fn verify_collapse_sampled(k: u32, n: u64, samples: u64, seed: u64) -> Result<CampaignReport> {
    let start = Instant::now();
    if k != 4 && k != 5 {
        return Err(Error::Contract(format!(
            "sampled collapse verification supports K = 4 or K = 5, got {k}"
        )));
    }
    if n == 0 {
        return Err(Error::Contract("n must be at least 1".into()));
    }
    let range_end = collapse_range_end(k)?;
    let mut report = CampaignReport::new(
        "collapse-sampled",
        CampaignParameters {
            k,
            n: Some(n),
            samples: Some(samples),
            r_max: Some(range_end),
            seed: Some(seed),
            ..Default::default()
        },
    );
    let center = PreferenceRelation::identity(k)?;
    let relations = enumerate_relations(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs: Vec<(Profile, Vec<u64>)> = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let profile = if i % 2 == 0 {
            let counts = sample_count_vector(n, relations.len(), &mut rng);
            Profile::new(k, relations.iter().cloned().zip(counts))?
        } else {
            let theta = rng.random_range(0.2..0.95);
            let sub_seed = rng.random::<u64>();
            generate_profile(&center, theta, n, sub_seed)?
        };
        let r_values = sample_r_values(&mut rng, range_end);
        jobs.push((profile, r_values));
    }
    let outcomes: Vec<(bool, Vec<(u64, bool)>)> = jobs
        .par_iter()
        .map(|(profile, r_values)| {
            let base = exhibits_level_r_fast(profile, &center, 1)?.holds;
            let levels = r_values
                .iter()
                .map(|&r| Ok((r, exhibits_level_r_fast(profile, &center, r)?.holds)))
                .collect::<Result<Vec<_>>>()?;
            Ok((base, levels))
        })
        .collect::<Result<_>>()?;
    for ((profile, _), (base, levels)) in jobs.iter().zip(outcomes) {
        report.profiles_examined += 1;
        report.checks_performed += 1 + levels.len() as u64;
        for (r, holds) in levels {
            if holds != base {
                report.violations.push(CampaignCase::new(
                    &center,
                    profile,
                    Some(r),
                    format!("verdict({r})={holds} but verdict(1)={base}"),
                ));
            }
        }
    }
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Searches the uncovered tail of levels, `K!/2 - c < r <= K!/2`, for
/// profiles that exhibit a tail level without exhibiting level 1. Every
/// candidate found by the fast checker is re-validated with the brute-force
/// checker before being reported as an example; the report is observational
/// and an empty example list is a legal outcome.
pub fn find_gap_witness(k: u32, n_max: u64) -> Result<CampaignReport> {
    let start = Instant::now();
    if k != 3 {
        return Err(Error::Capacity(format!(
            "gap exploration is guarded to K = 3, got {k}"
        )));
    }
    let range_end = collapse_range_end(k)?;
    let max_level = max_consensus_level(k)?;
    let mut report = CampaignReport::new(
        "gap-exploration",
        CampaignParameters {
            k,
            n_max: Some(n_max),
            r_max: Some(max_level),
            ..Default::default()
        },
    );
    let center = PreferenceRelation::identity(k)?;
    let profiles = composition_profiles(k, n_max)?;
    let tail: Vec<u64> = (range_end + 1..=max_level).collect();
    let findings: Vec<Vec<u64>> = profiles
        .par_iter()
        .map(|profile| {
            if exhibits_level_r_fast(profile, &center, 1)?.holds {
                return Ok(Vec::new());
            }
            let mut hits = Vec::new();
            for &r in &tail {
                if exhibits_level_r_fast(profile, &center, r)?.holds {
                    hits.push(r);
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    for (profile, hits) in profiles.iter().zip(findings) {
        report.profiles_examined += 1;
        report.checks_performed += 1 + tail.len() as u64;
        for r in hits {
            let brute_tail = exhibits_level_r_bruteforce(profile, &center, r)?.holds;
            let brute_base = exhibits_level_r_bruteforce(profile, &center, 1)?.holds;
            if brute_tail && !brute_base {
                report.examples.push(CampaignCase::new(
                    &center,
                    profile,
                    Some(r),
                    format!(
                        "exhibits level-{r} consensus but not level-1 \
                         (re-validated by the brute-force checker)"
                    ),
                ));
            } else {
                report.violations.push(CampaignCase::new(
                    &center,
                    profile,
                    Some(r),
                    format!(
                        "fast checker and brute force disagree: \
                         fast(level {r})=true, brute={brute_tail}, brute(level 1)={brute_base}"
                    ),
                ));
            }
        }
    }
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Seeded nonincreasing class-count profiles: every order in distance class
/// `k` gets the value drawn for that class, so the profile exhibits level-1
/// consensus by construction (nonconstant enforced, `n <= n_max` by
/// rejection).
fn sample_monotone_class_profiles(
    k: u32,
    n_max: u64,
    count: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Profile>> {
    let center = PreferenceRelation::identity(k)?;
    let table = distance_classes(&center)?;
    let width = table.classes().len();
    let mut profiles = Vec::with_capacity(count as usize);
    let mut attempts: u64 = 0;
    while (profiles.len() as u64) < count {
        attempts += 1;
        if attempts > count.saturating_mul(100_000) {
            return Err(Error::Capacity(
                "could not sample enough consensus profiles within the attempt budget".into(),
            ));
        }
        let mut values: Vec<u64> = (0..width).map(|_| rng.random_range(0..=3u64)).collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        if values.first() == values.last() {
            continue;
        }
        let n: u64 = table
            .classes()
            .iter()
            .zip(&values)
            .map(|(class, &v)| class.len() as u64 * v)
            .sum();
        if n == 0 || n > n_max {
            continue;
        }
        let entries = table
            .classes()
            .iter()
            .zip(&values)
            .flat_map(|(class, &v)| class.iter().map(move |relation| (relation.clone(), v)));
        profiles.push(Profile::new(k, entries)?);
    }
    Ok(profiles)
}

/// Checks that on every profile exhibiting level-1 consensus, the center's
/// top element is selected by Borda, plurality, antiplurality and a seeded
/// batch of random scoring rules. Exhaustive for K = 3, sampled for K = 4.
pub fn verify_scoring_theorem(
    k: u32,
    n_max: u64,
    score_samples: u32,
    profile_samples: Option<u64>,
    seed: u64,
) -> Result<CampaignReport> {
    let start = Instant::now();
    if k != 3 && k != 4 {
        return Err(Error::Contract(format!(
            "scoring verification supports K = 3 (exhaustive) or K = 4 (sampled), got {k}"
        )));
    }
    let mut report = CampaignReport::new(
        "scoring-rules",
        CampaignParameters {
            k,
            n_max: Some(n_max),
            score_samples: Some(score_samples),
            profile_samples: if k == 4 {
                Some(profile_samples.unwrap_or(DEFAULT_SCORING_PROFILE_SAMPLES))
            } else {
                None
            },
            seed: Some(seed),
            ..Default::default()
        },
    );
    let center = PreferenceRelation::identity(k)?;
    let top = center.top();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rules: Vec<(String, ScoreVector)> = vec![
        ("borda".into(), ScoreVector::borda(k)?),
        ("plurality".into(), ScoreVector::plurality(k)?),
        ("antiplurality".into(), ScoreVector::antiplurality(k)?),
    ];
    for i in 0..score_samples {
        rules.push((format!("random-{i}"), ScoreVector::random(k, &mut rng)?));
    }
    let profiles = if k == 3 {
        composition_profiles(k, n_max)?
    } else {
        let count = profile_samples.unwrap_or(DEFAULT_SCORING_PROFILE_SAMPLES);
        sample_monotone_class_profiles(k, n_max, count, &mut rng)?
    };
    let outcomes: Vec<Option<Vec<String>>> = profiles
        .par_iter()
        .map(|profile| {
            if !level1_characterization(profile, &center)? {
                return Ok(None);
            }
            let mut failures = Vec::new();
            for (name, scores) in &rules {
                let winners = scoring_winners(profile, scores)?;
                if !winners.contains(&top) {
                    let winner_names: Vec<String> = winners.iter().map(|a| a.name()).collect();
                    failures.push(format!(
                        "scoring rule '{name}' excludes the top element '{}': winners {:?}",
                        top.name(),
                        winner_names
                    ));
                }
            }
            Ok(Some(failures))
        })
        .collect::<Result<_>>()?;
    for (profile, outcome) in profiles.iter().zip(outcomes) {
        report.profiles_examined += 1;
        let Some(failures) = outcome else { continue };
        report.checks_performed += rules.len() as u64;
        for failure in failures {
            report
                .violations
                .push(CampaignCase::new(&center, profile, None, failure));
        }
    }
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Checks, over every profile with `n <= n_max` that exhibits the maximum
/// consensus level `K!/2` around the center: for odd n, that the majority
/// relation coincides with the center order; and for every n, that the
/// center's top element is a weak Condorcet winner. Guarded to K = 3.
pub fn verify_majority_and_condorcet(k: u32, n_max: u64) -> Result<CampaignReport> {
    let start = Instant::now();
    if k != 3 {
        return Err(Error::Capacity(format!(
            "majority/Condorcet verification is guarded to K = 3, got {k}"
        )));
    }
    let max_level = max_consensus_level(k)?;
    let mut report = CampaignReport::new(
        "majority-condorcet",
        CampaignParameters {
            k,
            n_max: Some(n_max),
            r_max: Some(max_level),
            ..Default::default()
        },
    );
    let center = PreferenceRelation::identity(k)?;
    let top = center.top();
    let profiles = composition_profiles(k, n_max)?;
    let verdicts: Vec<bool> = profiles
        .par_iter()
        .map(|profile| Ok(exhibits_level_r_fast(profile, &center, max_level)?.holds))
        .collect::<Result<_>>()?;
    for (profile, is_consensus) in profiles.iter().zip(verdicts) {
        report.profiles_examined += 1;
        if !is_consensus {
            continue;
        }
        if profile.n() % 2 == 1 {
            report.checks_performed += 1;
            let majority = majority_relation(profile);
            if !majority.matches_linear_order(&center) {
                report.violations.push(CampaignCase::new(
                    &center,
                    profile,
                    Some(max_level),
                    "odd-n consensus profile whose majority relation differs from the center"
                        .into(),
                ));
            }
        }
        report.checks_performed += 1;
        let weak = condorcet_winner(profile, CondorcetMode::Weak);
        if !weak.qualifiers.contains(&top) {
            report.violations.push(CampaignCase::new(
                &center,
                profile,
                Some(max_level),
                format!(
                    "consensus profile where the top element '{}' is not a weak Condorcet winner",
                    top.name()
                ),
            ));
        }
    }
    report.duration_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
