//! Rankings as TSV:
//!
//! ```text
//! # technique: metallaxis
//! rank	line	score
//! 1	10	1.000000
//! ```

use std::fmt::Write as _;
use std::path::Path;

use mbfl_core::localization::{RankEntry, Ranking, Technique};

use super::read_text;
use crate::error::{Error, Result};

pub fn ranking_file(technique: Technique) -> String {
    format!("ranking_{}.tsv", technique.name())
}

pub fn write_ranking(r: &Ranking) -> String {
    let mut out = format!("# technique: {}\nrank\tline\tscore\n", r.technique);
    for e in &r.entries {
        let _ = writeln!(out, "{}\t{}\t{:.6}", e.rank, e.line, e.score);
    }
    out
}

pub fn parse_ranking(path: &Path, text: &str) -> Result<Ranking> {
    let mut lines = text.lines().enumerate();
    let technique = lines
        .next()
        .and_then(|(_, l)| l.strip_prefix("# technique:"))
        .ok_or_else(|| Error::format(path, 1, "expected `# technique: <name>`"))?
        .trim()
        .parse::<Technique>()
        .map_err(|e| Error::format(path, 1, e))?;
    if lines.next().map(|(_, l)| l) != Some("rank\tline\tscore") {
        return Err(Error::format(path, 2, "expected header `rank line score`"));
    }
    let mut entries: Vec<RankEntry> = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [rank, ln, score] = fields[..] else {
            return Err(Error::format(path, n, "expected 3 tab-separated fields"));
        };
        let bad = |what: &str, v: &str| Error::format(path, n, format!("bad {what} `{v}`"));
        let entry = RankEntry {
            rank: rank.parse().map_err(|_| bad("rank", rank))?,
            line: ln.parse().map_err(|_| bad("line", ln))?,
            score: score.parse().map_err(|_| bad("score", score))?,
        };
        if entry.rank == 0 || entries.last().is_some_and(|p| p.rank > entry.rank) {
            return Err(Error::format(path, n, "ranks must be positive and non-decreasing"));
        }
        entries.push(entry);
    }
    Ok(Ranking { technique, entries })
}

pub fn read_ranking(path: &Path) -> Result<Ranking> {
    parse_ranking(path, &read_text(path)?)
}
