//! `test <id>; input: i1 i2 ...; expect: o1 o2 ...;`, one test per line.

use std::fmt::Write as _;
use std::path::Path;

use mbfl_core::minilang::{TestCase, TestSuite};

use super::{content_lines, read_text, valid_id};
use crate::error::{Error, Result};

fn numbers(field: &str, path: &Path, line: usize) -> Result<Vec<i64>> {
    field
        .split_whitespace()
        .map(|n| n.parse::<i64>().map_err(|_| Error::format(path, line, format!("`{n}` is not a 64-bit integer"))))
        .collect()
}

pub fn parse_suite(path: &Path, text: &str) -> Result<TestSuite> {
    let mut tests = Vec::new();
    for (n, line) in content_lines(text) {
        let bad = |msg: &str| Error::format(path, n, msg.to_string());
        let mut parts = line.split(';').map(str::trim);
        let id = parts
            .next()
            .and_then(|p| p.strip_prefix("test"))
            .map(str::trim)
            .ok_or_else(|| bad("expected `test <id>;`"))?;
        if !valid_id(id) {
            return Err(bad("test ids use letters, digits, `_`, `-` and `.`"));
        }
        let inputs = parts
            .next()
            .and_then(|p| p.strip_prefix("input:"))
            .ok_or_else(|| bad("expected `input: ...;`"))?;
        let expect = parts
            .next()
            .and_then(|p| p.strip_prefix("expect:"))
            .ok_or_else(|| bad("expected `expect: ...;`"))?;
        if parts.any(|rest| !rest.is_empty()) {
            return Err(bad("trailing text after `expect`"));
        }
        tests.push(TestCase::new(id, numbers(inputs, path, n)?, numbers(expect, path, n)?));
    }
    TestSuite::new(tests).map_err(|source| Error::Suite { path: path.to_path_buf(), source })
}

pub fn read_suite(path: &Path) -> Result<TestSuite> {
    parse_suite(path, &read_text(path)?)
}

fn join(values: &[i64]) -> String {
    values.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_suite(suite: &TestSuite) -> String {
    let mut out = String::new();
    for t in suite.tests() {
        let _ = writeln!(out, "test {}; input: {}; expect: {};", t.id, join(&t.inputs), join(&t.expected_output));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records() {
        let text = "# median\ntest t1; input: 1 2 3; expect: 2;\n\ntest t2; input: ; expect: -4 5;\n";
        let s = parse_suite(Path::new("s"), text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.tests()[0].inputs, vec![1, 2, 3]);
        assert!(s.tests()[1].inputs.is_empty());
        assert_eq!(s.tests()[1].expected_output, vec![-4, 5]);
        assert_eq!(parse_suite(Path::new("s"), &write_suite(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_malformed_records() {
        for bad in [
            "test t1 input: 1; expect: 1;",
            "test t1; input: x; expect: 1;",
            "test t1; input: 1;",
            "test a,b; input: 1; expect: 1;",
            "test t1; input: 1; expect: 1; more",
            "",
        ] {
            assert!(parse_suite(Path::new("s"), bad).is_err(), "{bad}");
        }
        let dup = "test t; input: 1; expect: 1;\ntest t; input: 2; expect: 2;";
        assert!(matches!(parse_suite(Path::new("s"), dup), Err(Error::Suite { .. })));
    }

    #[test]
    fn reports_the_offending_line() {
        let err = parse_suite(Path::new("s.txt"), "test a; input: 1; expect: 1;\ntest b; input: q; expect: 1;").unwrap_err();
        assert!(err.to_string().starts_with("s.txt:2:"), "{err}");
    }
}
