//! Line-oriented ballot files: one `count: relation` entry per line,
//! `#` comments, duplicate relation lines summed. `K` is inferred from the
//! first entry.

use std::fs;
use std::path::Path;

use crate::prefs::{parse_relation_infer, PreferenceRelation, Profile};
use crate::{Error, Result};

/// Parses ballot text into a profile.
pub fn parse_ballots(text: &str) -> Result<Profile> {
    let mut entries: Vec<(PreferenceRelation, u64)> = Vec::new();
    let mut k: Option<u32> = None;
    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (count_text, relation_text) =
            line.split_once(':').ok_or_else(|| Error::BallotParse {
                line: line_no,
                message: "expected 'count: relation'".into(),
            })?;
        let count: u64 = count_text.trim().parse().map_err(|_| Error::BallotParse {
            line: line_no,
            message: format!("invalid count '{}'", count_text.trim()),
        })?;
        if count == 0 {
            return Err(Error::BallotParse {
                line: line_no,
                message: "counts must be positive".into(),
            });
        }
        let relation = parse_relation_infer(relation_text).map_err(|err| Error::BallotParse {
            line: line_no,
            message: err.to_string(),
        })?;
        match k {
            None => k = Some(relation.k()),
            Some(expected) if expected != relation.k() => {
                return Err(Error::BallotParse {
                    line: line_no,
                    message: format!(
                        "relation has {} alternatives, expected {expected}",
                        relation.k()
                    ),
                });
            }
            _ => {}
        }
        entries.push((relation, count));
    }
    let k = k.ok_or_else(|| Error::BallotParse {
        line: 0,
        message: "no ballot lines found".into(),
    })?;
    Profile::new(k, entries)
}

/// Reads and parses a ballot file.
pub fn load_ballots(path: &Path) -> Result<Profile> {
    parse_ballots(&fs::read_to_string(path)?)
}

/// Renders a profile in ballot format, one line per order in lexicographic
/// order. Round-trips through [`parse_ballots`].
pub fn render_ballots(profile: &Profile) -> String {
    let mut out = String::new();
    for (relation, count) in profile.counts() {
        out.push_str(&format!("{count}: {relation}\n"));
    }
    out
}

pub fn save_ballots(profile: &Profile, path: &Path) -> Result<()> {
    fs::write(path, render_ballots(profile))?;
    Ok(())
}
