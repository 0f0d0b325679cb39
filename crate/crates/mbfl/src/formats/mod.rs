//! Text formats exchanged between pipeline stages.
//!
//! Every writer is deterministic: the same values always produce the same
//! bytes, which is what lets two runs be compared file by file.

mod bundle;
mod matrices;
mod mutants;
mod ranking;
mod suite;

use std::fs;
use std::path::Path;

pub use bundle::{parse_faults, parse_manifest, read_faults, read_manifest, write_faults, BugBundle};
pub use matrices::{
    parse_coverage, parse_results, read_coverage, read_results, write_coverage, write_coverage_csv, write_results,
    write_results_csv, write_results_diff_csv, write_verdicts_csv, COVERAGE, RESULTS, RESULTS_DIFF, VERDICTS,
};
pub use mutants::{parse_mutant_listing, read_mutants, write_mutant_listing, write_pruned_listing, ListedMutant};
pub use ranking::{parse_ranking, ranking_file, read_ranking, write_ranking};
pub use suite::{parse_suite, read_suite, write_suite};

use crate::error::{Error, Result};

pub const MUTANTS: &str = "mutants.tsv";
pub const PRUNED: &str = "pruned.tsv";
pub const GENERATION: &str = "generation.json";
pub const STATS: &str = "stats.json";

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Read { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| Error::Write { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| Error::Write { path: path.to_path_buf(), source })
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, e.line(), e.to_string()))
}

/// Ids end up as CSV headers and file names, so they stay plain.
pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Lines with their 1-based numbers, skipping blanks and `#` comments.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}
