//! Campaign reports: JSON documents with a stable field order and an
//! embedded schema version.
//!
//! The wall-clock duration is kept on the struct for human-facing summaries
//! but excluded from serialization, so reports for identical parameters and
//! seeds are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::prefs::{parse_relation_infer, PreferenceRelation, Profile};
use crate::{Result, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, Default, Serialize)]
pub struct CampaignParameters {
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score_samples: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub all_centers: bool,
}

/// A reproducible (profile, center, level) case: either a violation of the
/// claim a campaign checks, or a collected example.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignCase {
    pub center: String,
    pub profile: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub description: String,
}

impl CampaignCase {
    pub fn new(
        center: &PreferenceRelation,
        profile: &Profile,
        r: Option<u64>,
        description: String,
    ) -> Self {
        CampaignCase {
            center: center.to_string(),
            profile: profile
                .counts()
                .map(|(relation, count)| (relation.to_string(), count))
                .collect(),
            r,
            description,
        }
    }

    /// Rebuilds the profile recorded in this case.
    pub fn reconstruct_profile(&self) -> Result<Profile> {
        let mut entries = Vec::with_capacity(self.profile.len());
        let mut k = 3;
        for (text, &count) in &self.profile {
            let relation = parse_relation_infer(text)?;
            k = relation.k();
            entries.push((relation, count));
        }
        Profile::new(k, entries)
    }

    /// Rebuilds the center recorded in this case.
    pub fn reconstruct_center(&self) -> Result<PreferenceRelation> {
        parse_relation_infer(&self.center)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub schema_version: &'static str,
    pub campaign: String,
    pub parameters: CampaignParameters,
    pub profiles_examined: u64,
    pub checks_performed: u64,
    /// Breaches of the claim under verification; empty for a passing run.
    pub violations: Vec<CampaignCase>,
    /// Observational findings (e.g. gap witnesses); not failures.
    pub examples: Vec<CampaignCase>,
    #[serde(skip)]
    pub duration_ms: u64,
}

impl CampaignReport {
    pub(crate) fn new(campaign: &str, parameters: CampaignParameters) -> Self {
        CampaignReport {
            schema_version: REPORT_SCHEMA_VERSION,
            campaign: campaign.to_string(),
            parameters,
            profiles_examined: 0,
            checks_performed: 0,
            violations: Vec::new(),
            examples: Vec::new(),
            duration_ms: 0,
        }
    }

    /// Canonical JSON rendering (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report is serializable");
        text.push('\n');
        text
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Writes the canonical JSON rendering of a report.
pub fn save_report(report: &CampaignReport, path: &Path) -> Result<()> {
    fs::write(path, report.to_json())?;
    Ok(())
}
