//! Report rendering: a JSON document and a plain-text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use mbfl_core::evaluation::{BugResult, Report, TechniqueSummary};
use mbfl_core::execution::MutationStats;
use mbfl_core::localization::Technique;

use crate::error::{Error, Result};

#[derive(Serialize)]
struct JsonSummary {
    technique: Technique,
    top_n: BTreeMap<usize, usize>,
    mps: f64,
    map: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    bugs: &'a [BugResult],
    summary: Vec<JsonSummary>,
    mutation: &'a BTreeMap<String, MutationStats>,
}

pub fn to_json(report: &Report) -> Result<String> {
    let doc = JsonReport {
        bugs: &report.bugs,
        summary: report
            .summaries
            .iter()
            .map(|s| JsonSummary { technique: s.technique, top_n: s.top_n.iter().copied().collect(), mps: s.mps, map: s.map })
            .collect(),
        mutation: &report.mutation,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn title(t: Technique) -> &'static str {
    match t {
        Technique::Metallaxis => "Metallaxis",
        Technique::Muse => "MUSE",
        Technique::Optimal => "Optimal",
    }
}

pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let techniques: Vec<Technique> = report.summaries.iter().map(|s| s.technique).collect();

    let _ = write!(out, "{:<10}", "Accuracy");
    for t in &techniques {
        let _ = write!(out, "{:>12}", title(*t));
    }
    out.push('\n');
    if let Some(first) = report.summaries.first() {
        for (i, (n, _)) in first.top_n.iter().enumerate() {
            let _ = write!(out, "{:<10}", format!("Top {n}"));
            for s in &report.summaries {
                let _ = write!(out, "{:>12}", s.top_n[i].1);
            }
            out.push('\n');
        }
    }
    let rows: [(&str, fn(&TechniqueSummary) -> f64); 2] = [("MPS", |s| s.mps), ("MAP", |s| s.map)];
    for (label, pick) in rows {
        let _ = write!(out, "{label:<10}");
        for s in &report.summaries {
            let _ = write!(out, "{:>12.3}", pick(s));
        }
        out.push('\n');
    }

    let mut ids: Vec<&str> = Vec::new();
    for b in &report.bugs {
        if !ids.contains(&b.bug_id.as_str()) {
            ids.push(&b.bug_id);
        }
    }
    let width = ids.iter().map(|i| i.len()).max().unwrap_or(3).max(3) + 2;
    let compare = techniques.contains(&Technique::Metallaxis) && techniques.contains(&Technique::Muse);

    out.push_str("\nHighest fault rank\n");
    let _ = write!(out, "{:<width$}{:>6}", "Bug", "SLOC");
    for t in &techniques {
        let _ = write!(out, "{:>12}", title(*t));
    }
    if compare {
        let _ = write!(out, "{:>8}", "Diff");
    }
    out.push('\n');
    for id in &ids {
        let rank = |t| report.result(id, t).map(|r| r.best_rank);
        let sloc = report.bugs.iter().find(|b| b.bug_id == *id).map_or(0, |b| b.sloc);
        let _ = write!(out, "{id:<width$}{sloc:>6}");
        for t in &techniques {
            match rank(*t) {
                Some(r) => write!(out, "{r:>12}"),
                None => write!(out, "{:>12}", "-"),
            }
            .ok();
        }
        if compare {
            match (rank(Technique::Metallaxis), rank(Technique::Muse)) {
                (Some(a), Some(b)) => write!(out, "{:>8}", a as i64 - b as i64),
                _ => write!(out, "{:>8}", "-"),
            }
            .ok();
        }
        out.push('\n');
    }

    if !report.mutation.is_empty() {
        out.push_str("\nMutants\n");
        let _ = writeln!(out, "{:<width$}{:>8}{:>8}{:>9}{:>7}{:>17}", "Bug", "Gen.", "Dup.", "No-Dup.", "Live", "Killed (MS)");
        for (id, m) in ids.iter().filter_map(|id| report.mutation.get(*id).map(|m| (id, m))) {
            let killed = format!("{} ({:.3})", m.killed, m.mutation_score);
            let _ = writeln!(
                out,
                "{id:<width$}{:>8}{:>8}{:>9}{:>7}{killed:>17}",
                m.generated, m.duplicates, m.retained, m.dormant
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mbfl_core::evaluation::ps;

    fn sample() -> Report {
        let mk = |id: &str, technique, best_rank: usize, sloc: usize| BugResult {
            bug_id: id.into(),
            technique,
            best_rank,
            ps: ps(best_rank, sloc),
            ap: 1.0 / best_rank as f64,
            sloc,
        };
        let bugs = vec![
            mk("median", Technique::Metallaxis, 1, 11),
            mk("median", Technique::Muse, 9, 11),
            mk("median", Technique::Optimal, 1, 11),
        ];
        let stats = MutationStats { generated: 10, duplicates: 2, retained: 8, dormant: 1, killed: 7, mutation_score: 0.875 };
        Report::new(bugs, BTreeMap::from([("median".to_string(), stats)])).unwrap()
    }

    #[test]
    fn text_layout() {
        let text = to_text(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "Accuracy    Metallaxis        MUSE     Optimal");
        assert_eq!(lines[1], "Top 1                1           0           1");
        assert_eq!(lines[9], "MPS              0.909       0.182       0.909");
        assert!(text.contains("median      11           1           9           1      -8"), "{text}");
        assert!(text.contains("median        10       2        8      1        7 (0.875)"), "{text}");
    }

    #[test]
    fn json_fields() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&sample()).unwrap()).unwrap();
        assert_eq!(v["bugs"][1]["technique"], "muse");
        assert_eq!(v["bugs"][1]["best_rank"], 9);
        assert_eq!(v["summary"][0]["top_n"]["10"], 1);
        assert_eq!(v["summary"][2]["map"], 1.0);
        assert_eq!(v["mutation"]["median"]["retained"], 8);
    }
}
