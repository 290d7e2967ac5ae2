//! Verification campaigns, profile generation and ingestion.
//!
//! Campaigns sweep profile spaces (exhaustively at K = 3, sampled beyond)
//! and re-check the collapse equivalence, the level-monotonicity, the
//! scoring-rule claim and the majority/Condorcet claims, emitting
//! reproducible JSON reports. All randomness is seeded; identical parameters
//! produce byte-identical reports.

mod ballots;
mod campaigns;
mod report;

pub use ballots::{load_ballots, parse_ballots, render_ballots, save_ballots};
pub use campaigns::{
    find_gap_witness, generate_profile, verify_collapse_exhaustive, verify_collapse_sampled,
    verify_majority_and_condorcet, verify_scoring_theorem, DEFAULT_SCORING_PROFILE_SAMPLES,
};
pub use report::{save_report, CampaignCase, CampaignParameters, CampaignReport};
