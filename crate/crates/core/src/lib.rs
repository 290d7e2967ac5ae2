#![forbid(unsafe_code)]

//! Analysis toolkit for level-r consensus on linear preference orders.
//!
//! The crate models preference relations (linear orders on `K > 2`
//! alternatives) together with the inversion metric, and provides the
//! machinery built on top of it:
//!
//! - [`prefs`]: alternatives, preference relations, profiles, the inversion
//!   distance and distance classes around a center order;
//! - [`mahonian`]: Mahonian numbers `T(K,k)` (permutations by inversion
//!   count), the odd-class count and the collapse margin `c`;
//! - [`closeness`]: the "at least as close" / "closer than" relations on
//!   equal-sized disjoint sets of orders, with a sorted-dominance decision
//!   procedure and an exhaustive injection oracle;
//! - [`consensus`]: level-r consensus detection, both by brute-force subset
//!   enumeration and by an optimized count-vector search, plus the level-1
//!   characterization and the full consensus spectrum;
//! - [`balanced`]: m-balanced pairs around a center and their
//!   distance-preserving bijections;
//! - [`rules`]: scoring rules, the pairwise majority relation and Condorcet
//!   winners;
//! - [`harness`]: ballot-file ingestion, seeded profile generation and the
//!   verification campaigns run by the `consensus-lab` CLI.

pub mod balanced;
pub mod closeness;
pub mod consensus;
pub mod harness;
pub mod mahonian;
pub mod prefs;
pub mod rules;

use thiserror::Error;

/// Schema tag embedded in every JSON report emitted by this crate.
pub const REPORT_SCHEMA_VERSION: &str = "consensus-lab/1";

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two values disagree about the number of alternatives K.
    #[error("dimension mismatch: expected K={expected}, got K={got}")]
    DimensionMismatch { expected: u32, got: u32 },
    /// K is outside the supported domain; the framework requires K > 2.
    #[error("K must be at least 3, got {0}")]
    InvalidK(u32),
    /// Text could not be parsed as a relation. `position` is a 1-based
    /// character offset into the input.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    /// A ballot file line could not be parsed.
    #[error("ballot parse error on line {line}: {message}")]
    BallotParse { line: usize, message: String },
    /// A precondition of an operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The request exceeds a configured size guard.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Exact integer arithmetic overflowed.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    /// An underlying I/O operation failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub use balanced::{
    construct_balanced_pair, constructed_pair_size, distance_preserving_bijection, is_balanced,
    BalancedPair,
};
pub use closeness::{at_least_as_close, closer_than, injection_oracle, ClosenessWitness};
pub use consensus::{
    consensus_spectrum, exhibits_level_r_bruteforce, exhibits_level_r_fast,
    level1_characterization, ConsensusReport, CountVectorPair, LevelVerdict, SpectrumMode,
    ViolationWitness,
};
pub use mahonian::{
    collapse_margin, collapse_range_end, corollary_inequality_check, factorial, mahonian_table,
    max_consensus_level, MahonianTable,
};
pub use prefs::{
    distance_classes, enumerate_relations, inversion_distance, max_distance, parse_relation,
    parse_relation_infer, Alternative, DistanceTable, PreferenceRelation, Profile,
};
pub use rules::{
    condorcet_winner, majority_relation, scoring_totals, scoring_winners, CondorcetMode,
    CondorcetOutcome, MajorityRelation, ScoreVector,
};
