//! Fault files and the corpus manifest.
//!
//! A fault file names the bug and its faulty lines:
//!
//! ```text
//! bug: median
//! lines: 10
//! ```
//!
//! The manifest lists one bug per line as `<bug-id> <program> <tests> <faults>`,
//! with paths relative to the manifest's directory.

use std::path::{Path, PathBuf};

use mbfl_core::evaluation::FaultSpec;

use super::{content_lines, read_text, valid_id};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BugBundle {
    pub id: String,
    pub program: PathBuf,
    pub tests: PathBuf,
    pub faults: PathBuf,
}

pub fn parse_faults(path: &Path, text: &str) -> Result<FaultSpec> {
    let mut bug = None;
    let mut lines = None;
    for (n, line) in content_lines(text) {
        let (key, value) = line.split_once(':').ok_or_else(|| Error::format(path, n, "expected `key: value`"))?;
        match key.trim() {
            "bug" => bug = Some(value.trim().to_string()),
            "lines" => {
                let parsed: Result<Vec<u32>> = value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| Error::format(path, n, format!("`{s}` is not a line number"))))
                    .collect();
                lines = Some(parsed?);
            }
            other => return Err(Error::format(path, n, format!("unknown key `{other}`"))),
        }
    }
    let bug = bug.ok_or_else(|| Error::format(path, 1, "missing `bug:`"))?;
    let lines = lines.ok_or_else(|| Error::format(path, 1, "missing `lines:`"))?;
    Ok(FaultSpec::new(bug, lines)?)
}

pub fn read_faults(path: &Path) -> Result<FaultSpec> {
    parse_faults(path, &read_text(path)?)
}

pub fn write_faults(faults: &FaultSpec) -> String {
    let lines: Vec<String> = faults.faulty_lines.iter().map(u32::to_string).collect();
    format!("bug: {}\nlines: {}\n", faults.bug_id, lines.join(" "))
}

pub fn parse_manifest(path: &Path, text: &str) -> Result<Vec<BugBundle>> {
    let base = path.parent().unwrap_or(Path::new(""));
    let mut bundles: Vec<BugBundle> = Vec::new();
    for (n, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [id, program, tests, faults] = fields[..] else {
            return Err(Error::format(path, n, "expected `<bug-id> <program> <tests> <faults>`"));
        };
        if !valid_id(id) {
            return Err(Error::format(path, n, format!("bug id `{id}` must use letters, digits, `_`, `-` and `.`")));
        }
        if bundles.iter().any(|b| b.id == id) {
            return Err(Error::format(path, n, format!("duplicate bug id `{id}`")));
        }
        bundles.push(BugBundle {
            id: id.to_string(),
            program: base.join(program),
            tests: base.join(tests),
            faults: base.join(faults),
        });
    }
    if bundles.is_empty() {
        return Err(Error::format(path, 1, "manifest lists no bugs"));
    }
    Ok(bundles)
}

pub fn read_manifest(path: &Path) -> Result<Vec<BugBundle>> {
    parse_manifest(path, &read_text(path)?)
}
