use alloc::vec::Vec;

use super::Scores;
use crate::execution::{kill_vector_outputdiff, CoverageMatrix, ExecutionError, ResultMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillStats {
    pub mutant: alloc::string::String,
    /// Failing tests that kill the mutant.
    pub failed_k: usize,
    /// Passing tests that kill the mutant.
    pub passed_k: usize,
    pub totfailed: usize,
}

/// `failed / sqrt(totfailed * (failed + passed))`; 0 for a mutant no test kills.
///
/// Evaluated as `sqrt(failed^2 / (totfailed * (failed + passed)))` so that
/// mathematically equal scores from different counts compare equal.
pub fn ochiai(ks: &KillStats) -> f64 {
    debug_assert!(ks.totfailed >= 1, "ochiai needs at least one failing test");
    debug_assert!(ks.failed_k <= ks.totfailed);
    let killed = ks.failed_k + ks.passed_k;
    if killed == 0 || ks.failed_k == 0 || ks.totfailed == 0 {
        return 0.0;
    }
    let num = (ks.failed_k as u128 * ks.failed_k as u128) as f64;
    let den = (ks.totfailed as u128 * killed as u128) as f64;
    libm::sqrt(num / den)
}

pub fn kill_stats(cm: &CoverageMatrix, rm: &ResultMatrix) -> Result<Vec<KillStats>, ExecutionError> {
    if rm.tests != cm.tests {
        return Err(ExecutionError::TestMismatch);
    }
    let totfailed = cm.failing_count();
    Ok(rm
        .rows
        .iter()
        .map(|row| {
            let kills = kill_vector_outputdiff(row);
            let failed_k = kills.iter().filter(|t| !cm.original_verdicts[**t].is_pass()).count();
            KillStats { mutant: row.id.clone(), failed_k, passed_k: kills.len() - failed_k, totfailed }
        })
        .collect())
}

/// Per line, the highest Ochiai score among the mutants on that line; lines
/// without mutants score 0.
pub fn metallaxis_scores(cm: &CoverageMatrix, rm: &ResultMatrix) -> Result<Scores, ExecutionError> {
    cm.require_failing()?;
    let stats = kill_stats(cm, rm)?;
    let mut scores: Scores = cm.lines.iter().map(|l| (*l, 0.0)).collect();
    for (row, ks) in rm.rows.iter().zip(&stats) {
        let s = ochiai(ks);
        if let Some(best) = scores.get_mut(&row.line) {
            if s > *best {
                *best = s;
            }
        }
    }
    Ok(scores)
}
