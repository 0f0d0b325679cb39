//! Coverage and result matrices as CSV.
//!
//! All four files share one shape: a header row naming the key column and
//! then the test ids, followed by one row per key.
//!
//! | file | key | cells |
//! |------|-----|-------|
//! | `coverage.csv` | line | `1` if the test executed the line |
//! | `verdicts.csv` | `original` | `P`/`F` of the original program |
//! | `results.csv` | mutant id | `P`/`F` of the mutant |
//! | `results_diff.csv` | mutant id | `1` if the mutant's behavior differs from the original's |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use mbfl_core::execution::{CoverageMatrix, MutantRow, ResultCell, ResultMatrix};
use mbfl_core::minilang::Verdict;

use super::{read_text, write_text};
use crate::error::{Error, Result};

pub const COVERAGE: &str = "coverage.csv";
pub const VERDICTS: &str = "verdicts.csv";
pub const RESULTS: &str = "results.csv";
pub const RESULTS_DIFF: &str = "results_diff.csv";

fn header(key: &str, tests: &[String]) -> String {
    let mut h = String::from(key);
    for t in tests {
        h.push(',');
        h.push_str(t);
    }
    h.push('\n');
    h
}

fn row<T>(out: &mut String, key: impl std::fmt::Display, cells: impl Iterator<Item = T>, cell: impl Fn(T) -> char) {
    let _ = write!(out, "{key}");
    for c in cells {
        out.push(',');
        out.push(cell(c));
    }
    out.push('\n');
}

fn verdict_char(v: Verdict) -> char {
    v.letter()
}

fn bit(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

pub fn write_coverage_csv(cm: &CoverageMatrix) -> String {
    let mut out = header("line", &cm.tests);
    for (col, line) in cm.lines.iter().enumerate() {
        row(&mut out, line, cm.cells.iter().map(|r| r[col]), bit);
    }
    out
}

pub fn write_verdicts_csv(cm: &CoverageMatrix) -> String {
    let mut out = header("id", &cm.tests);
    row(&mut out, "original", cm.original_verdicts.iter().copied(), verdict_char);
    out
}

pub fn write_results_csv(rm: &ResultMatrix) -> String {
    let mut out = header("mutant", &rm.tests);
    for r in &rm.rows {
        row(&mut out, &r.id, r.cells.iter().map(|c| c.verdict), verdict_char);
    }
    out
}

pub fn write_results_diff_csv(rm: &ResultMatrix) -> String {
    let mut out = header("mutant", &rm.tests);
    for r in &rm.rows {
        row(&mut out, &r.id, r.cells.iter().map(|c| c.output_differs), bit);
    }
    out
}

struct Table<'a> {
    tests: Vec<String>,
    rows: Vec<(usize, &'a str, Vec<&'a str>)>,
}

fn parse_table<'a>(path: &Path, text: &'a str, key: &str) -> Result<Table<'a>> {
    let mut lines = text.lines().enumerate();
    let head = lines.next().map(|(_, h)| h).unwrap_or("");
    let mut cols = head.split(',');
    if cols.next() != Some(key) {
        return Err(Error::format(path, 1, format!("header must start with `{key}`")));
    }
    let tests: Vec<String> = cols.map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        let k = cells.next().unwrap_or("");
        let cells: Vec<&str> = cells.collect();
        if cells.len() != tests.len() {
            return Err(Error::format(path, i + 1, format!("expected {} cells, found {}", tests.len(), cells.len())));
        }
        rows.push((i + 1, k, cells));
    }
    Ok(Table { tests, rows })
}

fn parse_bit(path: &Path, line: usize, s: &str) -> Result<bool> {
    match s {
        "1" => Ok(true),
        "0" => Ok(false),
        _ => Err(Error::format(path, line, format!("expected 0 or 1, found `{s}`"))),
    }
}

fn parse_verdict(path: &Path, line: usize, s: &str) -> Result<Verdict> {
    match s {
        "P" => Ok(Verdict::Pass),
        "F" => Ok(Verdict::Fail),
        _ => Err(Error::format(path, line, format!("expected P or F, found `{s}`"))),
    }
}

pub fn parse_coverage(cov_path: &Path, cov: &str, verdict_path: &Path, verdicts: &str) -> Result<CoverageMatrix> {
    let ct = parse_table(cov_path, cov, "line")?;
    let vt = parse_table(verdict_path, verdicts, "id")?;
    if ct.tests != vt.tests {
        return Err(Error::format(verdict_path, 1, format!("test ids differ from {}", cov_path.display())));
    }
    let [(n, "original", ref cells)] = vt.rows[..] else {
        return Err(Error::format(verdict_path, 2, "expected exactly one row keyed `original`"));
    };
    let original_verdicts = cells.iter().map(|c| parse_verdict(verdict_path, n, c)).collect::<Result<Vec<_>>>()?;

    let mut lines = Vec::with_capacity(ct.rows.len());
    let mut cells = vec![Vec::with_capacity(ct.rows.len()); ct.tests.len()];
    for (n, key, row) in &ct.rows {
        let line: u32 = key.parse().map_err(|_| Error::format(cov_path, *n, format!("bad line number `{key}`")))?;
        if lines.last().is_some_and(|prev| *prev >= line) {
            return Err(Error::format(cov_path, *n, "lines must be strictly ascending"));
        }
        lines.push(line);
        for (t, c) in row.iter().enumerate() {
            cells[t].push(parse_bit(cov_path, *n, c)?);
        }
    }
    Ok(CoverageMatrix { tests: ct.tests, lines, cells, original_verdicts })
}

/// `lines` maps each mutant id to the line it mutates.
pub fn parse_results(
    res_path: &Path,
    results: &str,
    diff_path: &Path,
    diffs: &str,
    lines: &BTreeMap<String, u32>,
) -> Result<ResultMatrix> {
    let rt = parse_table(res_path, results, "mutant")?;
    let dt = parse_table(diff_path, diffs, "mutant")?;
    if rt.tests != dt.tests || rt.rows.len() != dt.rows.len() {
        return Err(Error::format(diff_path, 1, format!("shape differs from {}", res_path.display())));
    }
    let mut rows = Vec::with_capacity(rt.rows.len());
    for ((n, id, vs), (dn, did, ds)) in rt.rows.iter().zip(&dt.rows) {
        if id != did {
            return Err(Error::format(diff_path, *dn, format!("expected mutant `{id}`, found `{did}`")));
        }
        let line = *lines
            .get(*id)
            .ok_or_else(|| Error::format(res_path, *n, format!("mutant `{id}` is not in the mutant listing")))?;
        let cells = vs
            .iter()
            .zip(ds)
            .map(|(v, d)| {
                Ok(ResultCell { verdict: parse_verdict(res_path, *n, v)?, output_differs: parse_bit(diff_path, *dn, d)? })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(MutantRow { id: id.to_string(), line, cells });
    }
    Ok(ResultMatrix { tests: rt.tests, rows })
}

pub fn write_coverage(dir: &Path, cm: &CoverageMatrix) -> Result<()> {
    write_text(&dir.join(COVERAGE), &write_coverage_csv(cm))?;
    write_text(&dir.join(VERDICTS), &write_verdicts_csv(cm))
}

pub fn read_coverage(dir: &Path) -> Result<CoverageMatrix> {
    let (cp, vp) = (dir.join(COVERAGE), dir.join(VERDICTS));
    parse_coverage(&cp, &read_text(&cp)?, &vp, &read_text(&vp)?)
}

pub fn write_results(dir: &Path, rm: &ResultMatrix) -> Result<()> {
    write_text(&dir.join(RESULTS), &write_results_csv(rm))?;
    write_text(&dir.join(RESULTS_DIFF), &write_results_diff_csv(rm))
}

pub fn read_results(dir: &Path, lines: &BTreeMap<String, u32>) -> Result<ResultMatrix> {
    let (rp, dp) = (dir.join(RESULTS), dir.join(RESULTS_DIFF));
    parse_results(&rp, &read_text(&rp)?, &dp, &read_text(&dp)?, lines)
}
