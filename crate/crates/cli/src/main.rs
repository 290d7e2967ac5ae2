//! `consensus-lab`: command-line front end for the consensus-core library.
//!
//! Every subcommand prints a JSON document on stdout; campaign subcommands
//! additionally exit nonzero when violations were found, so they can gate
//! scripted runs.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use consensus_core::harness::{
    find_gap_witness, generate_profile, load_ballots, render_ballots, save_report,
    verify_collapse_exhaustive, verify_collapse_sampled, verify_majority_and_condorcet,
    verify_scoring_theorem, CampaignReport,
};
use consensus_core::{
    at_least_as_close, closer_than, condorcet_winner, consensus_spectrum, construct_balanced_pair,
    corollary_inequality_check, distance_preserving_bijection, exhibits_level_r_fast,
    inversion_distance, is_balanced, mahonian_table, majority_relation, max_consensus_level,
    parse_relation_infer, scoring_totals, scoring_winners, CondorcetMode, PreferenceRelation,
    Profile, ScoreVector, SpectrumMode,
};

#[derive(Parser)]
#[command(
    name = "consensus-lab",
    version,
    about = "Level-r consensus analysis on linear preference orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mahonian row T(K,k) with the odd-class count, margin and bound check
    Mahonian {
        #[arg(long)]
        k: u32,
    },
    /// Inversion distance between two orders, e.g. `distance "a>b>c" "c>b>a"`
    Distance { p: String, q: String },
    /// Weak and strict set-closeness verdicts with witness pairings
    Closer {
        #[arg(long)]
        center: String,
        /// Comma-separated orders, e.g. --left "b>a>c,a>c>b"
        #[arg(long, value_delimiter = ',')]
        left: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        right: Vec<String>,
    },
    /// Consensus verdicts for a ballot profile around a center
    Consensus {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        center: String,
        /// Check a single level instead of the full spectrum
        #[arg(long)]
        r: Option<u64>,
        /// Emit the full spectrum (the default when --r is absent)
        #[arg(long)]
        spectrum: bool,
        /// Evaluate every level independently (the default)
        #[arg(long, conflicts_with = "shortcut")]
        verify: bool,
        /// Copy the level-1 verdict across the collapsed range 1..=K!/2-c
        #[arg(long)]
        shortcut: bool,
    },
    /// Construct and validate the canonical (K!/2 - c)-balanced pair
    Balanced {
        #[arg(long)]
        center: String,
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
    },
    /// Scoring-rule winners of a ballot profile
    Winners {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleArg::Borda)]
        rule: RuleArg,
        /// Rank scores for --rule custom, e.g. --scores "2,1,0" or "1,1/2,0"
        #[arg(long)]
        scores: Option<String>,
    },
    /// Pairwise majority relation of a ballot profile
    Majority {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Verification campaigns; exit code 1 when violations are found
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Generate a seeded distance-decay profile in ballot format
    Gen {
        #[arg(long)]
        center: String,
        /// Decay factor in (0, 1]; 1 samples uniformly
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        /// Write the ballots here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Borda,
    Plurality,
    Antiplurality,
    Custom,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Collapse equivalence: exhaustive at K=3, sampled at K=4 or 5
    Collapse {
        #[arg(long)]
        k: u32,
        /// Exhaustive profile size bound (K=3; default 6)
        #[arg(long)]
        n_max: Option<u64>,
        /// Profile size for sampled runs (K=4/5; default 20)
        #[arg(long)]
        n: Option<u64>,
        /// Number of sampled profiles (K=4/5; default 1000)
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Sweep all centers instead of fixing the identity order (K=3)
        #[arg(long)]
        all_centers: bool,
        /// Also write the report to this file
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Scoring-rule claim on level-1 consensus profiles
    Scoring {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u64,
        #[arg(long, default_value_t = 20)]
        score_samples: u32,
        /// Profile draws for the sampled K=4 mode (default 500)
        #[arg(long)]
        profile_samples: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Majority coincidence (odd n) and weak Condorcet winner claims
    Majority {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Observational search of the uncovered tail levels K!/2-c < r <= K!/2
    Gap {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_rel(text: &str) -> anyhow::Result<PreferenceRelation> {
    parse_relation_infer(text).with_context(|| format!("invalid relation '{text}'"))
}

fn parse_rel_set(texts: &[String]) -> anyhow::Result<BTreeSet<PreferenceRelation>> {
    texts.iter().map(|t| parse_rel(t)).collect()
}

fn parse_scores(text: &str) -> anyhow::Result<Vec<Ratio<i64>>> {
    text.split(',')
        .map(|token| {
            let token = token.trim();
            let (numerator, denominator) = match token.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (token, "1"),
            };
            let n: i64 = numerator
                .parse()
                .with_context(|| format!("invalid score '{token}'"))?;
            let d: i64 = denominator
                .parse()
                .with_context(|| format!("invalid score '{token}'"))?;
            if d == 0 {
                bail!("invalid score '{token}': zero denominator");
            }
            Ok(Ratio::new(n, d))
        })
        .collect()
}

fn load_profile(path: &Path) -> anyhow::Result<Profile> {
    load_ballots(path).with_context(|| format!("cannot load ballots from {}", path.display()))
}

fn witness_pairs(witness: &consensus_core::ClosenessWitness) -> Vec<[String; 2]> {
    witness
        .pairs()
        .iter()
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .collect()
}

fn emit_report(report: &CampaignReport, json_path: Option<&PathBuf>) -> anyhow::Result<ExitCode> {
    print!("{}", report.to_json());
    if let Some(path) = json_path {
        save_report(report, path)
            .with_context(|| format!("cannot write report to {}", path.display()))?;
    }
    eprintln!(
        "campaign {}: {} profiles, {} checks, {} violations, {} examples ({} ms)",
        report.campaign,
        report.profiles_examined,
        report.checks_performed,
        report.violations.len(),
        report.examples.len(),
        report.duration_ms
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Mahonian { k } => {
            let table = mahonian_table(k)?;
            let output = json!({
                "schema_version": consensus_core::REPORT_SCHEMA_VERSION,
                "k": k,
                "row": table.row(),
                "odd_count": table.odd_count(),
                "margin": table.margin(),
                "max_level": max_consensus_level(k)?,
                "collapse_range_end": max_consensus_level(k)? - table.margin(),
                "corollary_inequality_holds": corollary_inequality_check(k)?,
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Distance { p, q } => {
            let p = parse_rel(&p)?;
            let q = parse_rel(&q)?;
            let output = json!({
                "k": p.k(),
                "p": p.to_string(),
                "q": q.to_string(),
                "distance": inversion_distance(&p, &q)?,
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Closer {
            center,
            left,
            right,
        } => {
            let center = parse_rel(&center)?;
            let left = parse_rel_set(&left)?;
            let right = parse_rel_set(&right)?;
            let weak = at_least_as_close(&left, &right, &center)?;
            let strict = closer_than(&left, &right, &center)?;
            let output = json!({
                "center": center.to_string(),
                "weak": weak.is_some(),
                "weak_witness": weak.as_ref().map(witness_pairs),
                "strict": strict.is_some(),
                "strict_witness": strict.as_ref().map(witness_pairs),
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Consensus {
            profile,
            center,
            r,
            spectrum,
            verify: _,
            shortcut,
        } => {
            let ballots = load_profile(&profile)?;
            let center = parse_rel(&center)?;
            if let Some(level) = r {
                if spectrum {
                    bail!("--r and --spectrum are mutually exclusive");
                }
                let verdict = exhibits_level_r_fast(&ballots, &center, level)?;
                println!("{}", serde_json::to_string_pretty(&verdict)?);
            } else {
                let mode = if shortcut {
                    SpectrumMode::CollapseShortcut
                } else {
                    SpectrumMode::Independent
                };
                let report = consensus_spectrum(&ballots, &center, mode)?;
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Balanced { center, r1, r2 } => {
            let center = parse_rel(&center)?;
            let r1 = parse_rel(&r1)?;
            let r2 = parse_rel(&r2)?;
            let pair = construct_balanced_pair(&center, &r1, &r2)?;
            let bijection = distance_preserving_bijection(&pair)?;
            let mutual_weak = (
                at_least_as_close(&pair.left, &pair.right, &center)?.is_some(),
                at_least_as_close(&pair.right, &pair.left, &center)?.is_some(),
            );
            let strict_either = closer_than(&pair.left, &pair.right, &center)?.is_some()
                || closer_than(&pair.right, &pair.left, &center)?.is_some();
            let output = json!({
                "center": center.to_string(),
                "m": pair.m,
                "left": pair.left.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "right": pair.right.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "is_balanced": is_balanced(&pair)?,
                "bijection": bijection
                    .iter()
                    .map(|(x, y)| [x.to_string(), y.to_string()])
                    .collect::<Vec<_>>(),
                "mutual_weak_closeness": {
                    "left_right": mutual_weak.0,
                    "right_left": mutual_weak.1,
                },
                "strict_either_direction": strict_either,
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Winners {
            profile,
            rule,
            scores,
        } => {
            let ballots = load_profile(&profile)?;
            let k = ballots.k();
            let (rule_name, vector) = match rule {
                RuleArg::Borda => ("borda", ScoreVector::borda(k)?),
                RuleArg::Plurality => ("plurality", ScoreVector::plurality(k)?),
                RuleArg::Antiplurality => ("antiplurality", ScoreVector::antiplurality(k)?),
                RuleArg::Custom => {
                    let text = scores
                        .as_deref()
                        .context("--rule custom requires --scores")?;
                    ("custom", ScoreVector::new(parse_scores(text)?)?)
                }
            };
            let totals = scoring_totals(&ballots, &vector)?;
            let winners = scoring_winners(&ballots, &vector)?;
            let output = json!({
                "rule": rule_name,
                "scores": vector.scores().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "totals": totals
                    .iter()
                    .map(|(alternative, total)| (alternative.name(), total.to_string()))
                    .collect::<std::collections::BTreeMap<_, _>>(),
                "winners": winners.iter().map(|a| a.name()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Majority { profile } => {
            let ballots = load_profile(&profile)?;
            let majority = majority_relation(&ballots);
            let weak = condorcet_winner(&ballots, CondorcetMode::Weak);
            let strict = condorcet_winner(&ballots, CondorcetMode::Strict);
            let output = json!({
                "k": majority.k(),
                "n": ballots.n(),
                "tallies": majority.tallies(),
                "pairs": majority
                    .pairs()
                    .iter()
                    .map(|(a, b)| [a.name(), b.name()])
                    .collect::<Vec<_>>(),
                "complete": majority.is_complete(),
                "transitive": majority.is_transitive(),
                "condorcet": {
                    "strict_winner": strict.winner.map(|a| a.name()),
                    "weak_winner": weak.winner.map(|a| a.name()),
                    "weak_qualifiers": weak.qualifiers.iter().map(|a| a.name()).collect::<Vec<_>>(),
                    "tie_break_applied": weak.tie_break_applied,
                },
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(command) => match command {
            VerifyCommand::Collapse {
                k,
                n_max,
                n,
                samples,
                seed,
                all_centers,
                json,
            } => {
                let report = if k == 3 {
                    verify_collapse_exhaustive(k, n_max.unwrap_or(6), all_centers)?
                } else {
                    verify_collapse_sampled(k, n.unwrap_or(20), samples.unwrap_or(1000), seed)?
                };
                emit_report(&report, json.as_ref())
            }
            VerifyCommand::Scoring {
                k,
                n_max,
                score_samples,
                profile_samples,
                seed,
                json,
            } => {
                let report =
                    verify_scoring_theorem(k, n_max, score_samples, profile_samples, seed)?;
                emit_report(&report, json.as_ref())
            }
            VerifyCommand::Majority { k, n_max, json } => {
                let report = verify_majority_and_condorcet(k, n_max)?;
                emit_report(&report, json.as_ref())
            }
            VerifyCommand::Gap { k, n_max, json } => {
                let report = find_gap_witness(k, n_max)?;
                emit_report(&report, json.as_ref())
            }
        },
        Command::Gen {
            center,
            theta,
            n,
            seed,
            out,
        } => {
            let center = parse_rel(&center)?;
            let profile = generate_profile(&center, theta, n, seed)?;
            let ballots = render_ballots(&profile);
            match out {
                Some(path) => std::fs::write(&path, ballots)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => print!("{ballots}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
