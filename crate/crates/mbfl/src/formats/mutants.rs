//! Mutant listings: tab-separated `id operator line edit description`.
//!
//! The edit column is enough to rebuild a mutant from the original program,
//! so the run stage needs nothing but the program and this file.

use std::fmt::Write as _;
use std::path::Path;

use mbfl_core::minilang::Program;
use mbfl_core::mutation::{Edit, Mutant, OperatorId, PrunedMutant};

use super::read_text;
use crate::error::{Error, Result};

const HEADER: &str = "id\toperator\tline\tedit\tdescription";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListedMutant {
    pub id: String,
    pub operator: OperatorId,
    pub line: u32,
    pub edit: Edit,
    pub description: String,
}

pub fn write_mutant_listing(mutants: &[Mutant]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for m in mutants {
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", m.id, m.operator, m.line, m.edit, m.description);
    }
    out
}

/// Removed mutants with the id of the retained mutant they duplicate, or
/// `original` for mutants equivalent to the program itself.
pub fn write_pruned_listing(pruned: &[PrunedMutant]) -> String {
    let mut out = format!("{HEADER}\tsame_as\n");
    for p in pruned {
        let m = &p.mutant;
        let rep = p.representative.as_deref().unwrap_or("original");
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", m.id, m.operator, m.line, m.edit, m.description, rep);
    }
    out
}

pub fn parse_mutant_listing(path: &Path, text: &str) -> Result<Vec<ListedMutant>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(Error::format(path, 1, format!("expected header `{}`", HEADER.replace('\t', " ")))),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, op, ln, edit, description] = fields[..] else {
            return Err(Error::format(path, n, "expected 5 tab-separated fields"));
        };
        out.push(ListedMutant {
            id: id.to_string(),
            operator: op.parse().map_err(|e| Error::format(path, n, format!("{e}")))?,
            line: ln.parse().map_err(|_| Error::format(path, n, format!("bad line number `{ln}`")))?,
            edit: edit.parse().map_err(|e| Error::format(path, n, format!("{e}")))?,
            description: description.to_string(),
        });
    }
    Ok(out)
}

/// Reads a listing and rebuilds each mutant against `program`, checking that
/// the rebuilt change matches the recorded description.
pub fn read_mutants(path: &Path, program: &Program) -> Result<Vec<Mutant>> {
    let listed = parse_mutant_listing(path, &read_text(path)?)?;
    listed
        .into_iter()
        .map(|l| {
            let m = Mutant::rebuild(program, l.id, l.operator, l.line, l.edit)
                .map_err(|source| Error::Edit { path: path.to_path_buf(), source })?;
            if m.description != l.description {
                return Err(Error::Usage(format!(
                    "{}: mutant {} does not match the program (listed `{}`, rebuilt `{}`)",
                    path.display(),
                    m.id,
                    l.description,
                    m.description
                )));
            }
            Ok(m)
        })
        .collect()
}
