//! Accuracy metrics for rankings against known fault locations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::execution::MutationStats;
use crate::localization::{rank_with_ties, Ranking, Scores, Technique};

/// The cut-offs reported in the Top-N table.
pub const TOP_N: [usize; 8] = [1, 5, 10, 15, 20, 25, 30, 35];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluationError {
    #[error("bug `{0}` has no faulty lines")]
    NoFaultyLines(String),
    #[error("faulty line {line} of bug `{bug}` is not an executable line")]
    UnknownLine { bug: String, line: u32 },
    #[error("mean of an empty set")]
    EmptySet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FaultSpec {
    pub bug_id: String,
    pub faulty_lines: BTreeSet<u32>,
}

impl FaultSpec {
    pub fn new(bug_id: impl Into<String>, faulty_lines: impl IntoIterator<Item = u32>) -> Result<Self, EvaluationError> {
        let bug_id = bug_id.into();
        let faulty_lines: BTreeSet<u32> = faulty_lines.into_iter().collect();
        if faulty_lines.is_empty() {
            return Err(EvaluationError::NoFaultyLines(bug_id));
        }
        Ok(FaultSpec { bug_id, faulty_lines })
    }

    /// Checks that every faulty line is one of `sloc`.
    pub fn check_against(&self, sloc: &[u32]) -> Result<(), EvaluationError> {
        match self.faulty_lines.iter().find(|l| sloc.binary_search(l).is_err()) {
            Some(line) => Err(EvaluationError::UnknownLine { bug: self.bug_id.clone(), line: *line }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BugResult {
    pub bug_id: String,
    pub technique: Technique,
    pub best_rank: usize,
    pub ps: f64,
    pub ap: f64,
    /// Number of ranked lines.
    pub sloc: usize,
}

/// How many bugs have their best rank within the first `n`.
pub fn top_n(best_ranks: &[usize], n: usize) -> usize {
    best_ranks.iter().filter(|r| **r <= n).count()
}

/// Fraction of ranked lines a developer does not need to inspect.
pub fn ps(best_rank: usize, m: usize) -> f64 {
    debug_assert!(best_rank >= 1 && best_rank <= m);
    (m - best_rank) as f64 / m as f64
}

/// Average precision over sequential positions of the ranking.
pub fn ap(ranking: &Ranking, faults: &FaultSpec) -> Result<f64, EvaluationError> {
    if faults.faulty_lines.is_empty() {
        return Err(EvaluationError::NoFaultyLines(faults.bug_id.clone()));
    }
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, entry) in ranking.entries.iter().enumerate() {
        if faults.faulty_lines.contains(&entry.line) {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / faults.faulty_lines.len() as f64)
}

pub fn mean(values: &[f64]) -> Result<f64, EvaluationError> {
    if values.is_empty() {
        return Err(EvaluationError::EmptySet);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn mps(ps_values: &[f64]) -> Result<f64, EvaluationError> {
    mean(ps_values)
}

pub fn map_metric(ap_values: &[f64]) -> Result<f64, EvaluationError> {
    mean(ap_values)
}

/// Faulty lines score 1, everything else 0.
pub fn optimal_scores(sloc: &[u32], faults: &FaultSpec) -> Scores {
    sloc.iter().map(|l| (*l, if faults.faulty_lines.contains(l) { 1.0 } else { 0.0 })).collect()
}

pub fn optimal_ranking(sloc: &[u32], faults: &FaultSpec) -> Ranking {
    rank_with_ties(Technique::Optimal, &optimal_scores(sloc, faults), Some(&faults.faulty_lines))
}

/// Ranks `scores` with the fault-aware tie rule and scores the result.
pub fn evaluate_scores(
    technique: Technique,
    scores: &Scores,
    faults: &FaultSpec,
) -> Result<(Ranking, BugResult), EvaluationError> {
    let ranking = rank_with_ties(technique, scores, Some(&faults.faulty_lines));
    let result = evaluate_ranking(&ranking, faults)?;
    Ok((ranking, result))
}

pub fn evaluate_ranking(ranking: &Ranking, faults: &FaultSpec) -> Result<BugResult, EvaluationError> {
    let mut best = usize::MAX;
    for line in &faults.faulty_lines {
        match ranking.rank_of(*line) {
            Some(r) => best = best.min(r),
            None => return Err(EvaluationError::UnknownLine { bug: faults.bug_id.clone(), line: *line }),
        }
    }
    if best == usize::MAX {
        return Err(EvaluationError::NoFaultyLines(faults.bug_id.clone()));
    }
    let m = ranking.len();
    Ok(BugResult {
        bug_id: faults.bug_id.clone(),
        technique: ranking.technique,
        best_rank: best,
        ps: ps(best, m),
        ap: ap(ranking, faults)?,
        sloc: m,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TechniqueSummary {
    pub technique: Technique,
    /// `(n, bugs localized within the first n)` for each cut-off in [`TOP_N`].
    pub top_n: Vec<(usize, usize)>,
    pub mps: f64,
    pub map: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Report {
    pub bugs: Vec<BugResult>,
    pub summaries: Vec<TechniqueSummary>,
    pub mutation: BTreeMap<String, MutationStats>,
}

impl Report {
    pub fn new(bugs: Vec<BugResult>, mutation: BTreeMap<String, MutationStats>) -> Result<Self, EvaluationError> {
        let mut by_technique: BTreeMap<Technique, Vec<&BugResult>> = BTreeMap::new();
        for b in &bugs {
            by_technique.entry(b.technique).or_default().push(b);
        }
        let mut summaries = Vec::new();
        for (technique, results) in by_technique {
            let ranks: Vec<usize> = results.iter().map(|r| r.best_rank).collect();
            let ps_values: Vec<f64> = results.iter().map(|r| r.ps).collect();
            let ap_values: Vec<f64> = results.iter().map(|r| r.ap).collect();
            summaries.push(TechniqueSummary {
                technique,
                top_n: TOP_N.iter().map(|n| (*n, top_n(&ranks, *n))).collect(),
                mps: mps(&ps_values)?,
                map: map_metric(&ap_values)?,
            });
        }
        Ok(Report { bugs, summaries, mutation })
    }

    pub fn summary(&self, technique: Technique) -> Option<&TechniqueSummary> {
        self.summaries.iter().find(|s| s.technique == technique)
    }

    pub fn result(&self, bug_id: &str, technique: Technique) -> Option<&BugResult> {
        self.bugs.iter().find(|b| b.bug_id == bug_id && b.technique == technique)
    }
}
