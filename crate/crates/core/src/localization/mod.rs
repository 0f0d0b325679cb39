//! Statement suspiciousness and ranking.

mod metallaxis;
mod muse;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

pub use metallaxis::{kill_stats, metallaxis_scores, ochiai, KillStats};
pub use muse::{flip_counts, muse_alpha, muse_scores, Alpha, FlipCounts, MuseConfig};

/// Suspiciousness per executable line.
pub type Scores = BTreeMap<u32, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Technique {
    Metallaxis,
    Muse,
    Optimal,
}

impl Technique {
    pub fn name(self) -> &'static str {
        match self {
            Technique::Metallaxis => "metallaxis",
            Technique::Muse => "muse",
            Technique::Optimal => "optimal",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "metallaxis" => Ok(Technique::Metallaxis),
            "muse" => Ok(Technique::Muse),
            "optimal" => Ok(Technique::Optimal),
            _ => Err(alloc::format!("unknown technique `{}`", s)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankEntry {
    pub line: u32,
    pub score: f64,
    pub rank: usize,
}

/// Lines by descending suspiciousness, ties in ascending line order.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    pub technique: Technique,
    pub entries: Vec<RankEntry>,
}

impl Ranking {
    pub fn rank_of(&self, line: u32) -> Option<usize> {
        self.entries.iter().find(|e| e.line == line).map(|e| e.rank)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn normalized(score: f64) -> f64 {
    // -0.0 and 0.0 must land in the same tie group.
    if score == 0.0 {
        0.0
    } else {
        score
    }
}

/// Sorts lines by score and assigns tie-aware ranks.
///
/// A tie group of `n` lines occupying positions `i..=j` all get rank `j`
/// (the worst position of the group). When `faulty_lines` is given and the
/// group contains `k > 1` faulty lines, the whole group gets `j - k + 1`
/// instead: the rank the group would have if it held a single faulty line.
pub fn rank_with_ties(technique: Technique, scores: &Scores, faulty_lines: Option<&BTreeSet<u32>>) -> Ranking {
    let mut order: Vec<(u32, f64)> = scores.iter().map(|(l, s)| (*l, normalized(*s))).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut entries = Vec::with_capacity(order.len());
    let mut start = 0;
    while start < order.len() {
        let score = order[start].1;
        let mut end = start;
        while end + 1 < order.len() && order[end + 1].1.total_cmp(&score) == Ordering::Equal {
            end += 1;
        }
        let upper = end + 1;
        let faulty_in_group = faulty_lines
            .map(|f| order[start..=end].iter().filter(|(l, _)| f.contains(l)).count())
            .unwrap_or(0);
        let rank = if faulty_in_group > 1 { upper - faulty_in_group + 1 } else { upper };
        entries.extend(order[start..=end].iter().map(|(line, score)| RankEntry { line: *line, score: *score, rank }));
        start = end + 1;
    }
    Ranking { technique, entries }
}

/// Re-applies the tie rule to an existing ranking, e.g. one read back from a
/// file where scores were rounded. Tie groups are recovered from equal ranks,
/// which are distinct between groups under either rule.
pub fn retie(ranking: &Ranking, faulty_lines: &BTreeSet<u32>) -> Ranking {
    let e = &ranking.entries;
    let mut entries = Vec::with_capacity(e.len());
    let mut start = 0;
    while start < e.len() {
        let mut end = start;
        while end + 1 < e.len() && e[end + 1].rank == e[start].rank {
            end += 1;
        }
        let upper = end + 1;
        let k = e[start..=end].iter().filter(|x| faulty_lines.contains(&x.line)).count();
        let rank = if k > 1 { upper - k + 1 } else { upper };
        entries.extend(e[start..=end].iter().map(|x| RankEntry { rank, ..*x }));
        start = end + 1;
    }
    Ranking { technique: ranking.technique, entries }
}
