//! MUSE: suspiciousness from verdict flips.
//!
//! For a statement `s` with `mut(s)` resident mutants,
//!
//! ```text
//! mu(s) = 1/mut(s) * sum_m ( |f_P(s) & p_m| / |f_P|  -  alpha * |p_P(s) & f_m| / |p_P| )
//! ```
//!
//! where `f_P(s)` / `p_P(s)` are the failing / passing tests covering `s`,
//! `p_m` the tests that pass on mutant `m` and `f_m` those that fail on it.
//! Sums are kept as integers and divided once, so lines whose scores are
//! equal as rationals also compare equal as floats.

use alloc::collections::BTreeMap;

use super::Scores;
use crate::execution::{flip_vector, CoverageMatrix, ExecutionError, ResultMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Alpha {
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct MuseConfig {
    pub alpha: Alpha,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlipCounts {
    pub line: u32,
    pub mut_s: usize,
    /// Σ_m |f_P(s) ∩ p_m|
    pub f2p: usize,
    /// Σ_m |p_P(s) ∩ f_m|
    pub p2f: usize,
    pub sum_f2p_frac: f64,
    pub sum_p2f_frac: f64,
}

fn check(cm: &CoverageMatrix, rm: &ResultMatrix) -> Result<(usize, usize), ExecutionError> {
    if rm.tests != cm.tests {
        return Err(ExecutionError::TestMismatch);
    }
    cm.require_failing()?;
    if cm.passing_count() == 0 {
        return Err(ExecutionError::NoPassingTests);
    }
    Ok((cm.failing_count(), cm.passing_count()))
}

/// Flip totals per executable line, restricted to tests covering the line.
pub fn flip_counts(cm: &CoverageMatrix, rm: &ResultMatrix) -> Result<BTreeMap<u32, FlipCounts>, ExecutionError> {
    let (nf, np) = check(cm, rm)?;
    let mut out: BTreeMap<u32, FlipCounts> = cm
        .lines
        .iter()
        .map(|l| (*l, FlipCounts { line: *l, mut_s: 0, f2p: 0, p2f: 0, sum_f2p_frac: 0.0, sum_p2f_frac: 0.0 }))
        .collect();
    for row in &rm.rows {
        let Some(fc) = out.get_mut(&row.line) else { continue };
        let flips = flip_vector(row, cm);
        fc.mut_s += 1;
        fc.f2p += flips.f2p.iter().filter(|t| cm.covers(**t, row.line)).count();
        fc.p2f += flips.p2f.iter().filter(|t| cm.covers(**t, row.line)).count();
    }
    for fc in out.values_mut() {
        fc.sum_f2p_frac = fc.f2p as f64 / nf as f64;
        fc.sum_p2f_frac = fc.p2f as f64 / np as f64;
    }
    Ok(out)
}

/// Global flip totals `(Σ_m |f_P ∩ p_m|, Σ_m |p_P ∩ f_m|)` over all mutants.
fn global_flips(cm: &CoverageMatrix, rm: &ResultMatrix) -> (u128, u128) {
    rm.rows.iter().fold((0, 0), |(f, p), row| {
        let flips = flip_vector(row, cm);
        (f + flips.f2p.len() as u128, p + flips.p2f.len() as u128)
    })
}

/// Alpha as an exact ratio `num / den`, or 1 when no test ever turns from
/// passing to failing.
fn alpha_ratio(cm: &CoverageMatrix, rm: &ResultMatrix, nf: usize, np: usize) -> (u128, u128) {
    let (f2p, p2f) = global_flips(cm, rm);
    if p2f == 0 {
        (1, 1)
    } else {
        (f2p * np as u128, p2f * nf as u128)
    }
}

/// The balancing factor that equalizes the global means of the two terms.
pub fn muse_alpha(cm: &CoverageMatrix, rm: &ResultMatrix) -> Result<f64, ExecutionError> {
    let (nf, np) = check(cm, rm)?;
    let (num, den) = alpha_ratio(cm, rm, nf, np);
    Ok(num as f64 / den as f64)
}

/// Lines without mutants score `-inf` so they rank after every scored line.
pub fn muse_scores(cm: &CoverageMatrix, rm: &ResultMatrix, cfg: &MuseConfig) -> Result<Scores, ExecutionError> {
    let (nf, np) = check(cm, rm)?;
    let counts = flip_counts(cm, rm)?;
    let (nf, np) = (nf as i128, np as i128);
    let auto = match cfg.alpha {
        Alpha::Auto => Some(alpha_ratio(cm, rm, nf as usize, np as usize)),
        Alpha::Fixed(_) => None,
    };
    Ok(counts
        .into_values()
        .map(|fc| {
            if fc.mut_s == 0 {
                return (fc.line, f64::NEG_INFINITY);
            }
            let (a, b, m) = (fc.f2p as i128, fc.p2f as i128, fc.mut_s as i128);
            let score = match (cfg.alpha, auto) {
                (_, Some((num, den))) => {
                    let (num, den) = (num as i128, den as i128);
                    let top = a * np * den - num * b * nf;
                    top as f64 / (nf * np * m * den) as f64
                }
                (Alpha::Fixed(alpha), None) => ((a * np) as f64 - alpha * (b * nf) as f64) / (nf * np * m) as f64,
                (Alpha::Auto, None) => unreachable!(),
            };
            (fc.line, score)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::execution::{MutantRow, ResultCell};
    use crate::minilang::Verdict::{self, Fail, Pass};
    use alloc::string::String;
    use alloc::vec;
    use alloc::vec::Vec;

    /// Every test covers every line unless `coverage` says otherwise.
    fn fixture(orig: &[Verdict], lines: &[u32], rows: &[(u32, &[Verdict])]) -> (CoverageMatrix, ResultMatrix) {
        let tests: Vec<String> = (0..orig.len()).map(|i| alloc::format!("t{i}")).collect();
        let cm = CoverageMatrix {
            tests: tests.clone(),
            lines: lines.to_vec(),
            cells: vec![vec![true; lines.len()]; orig.len()],
            original_verdicts: orig.to_vec(),
        };
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, (line, vs))| MutantRow {
                id: alloc::format!("m{i}"),
                line: *line,
                cells: vs
                    .iter()
                    .zip(orig)
                    .map(|(v, o)| ResultCell { verdict: *v, output_differs: v != o })
                    .collect(),
            })
            .collect();
        (cm, ResultMatrix { tests, rows })
    }

    #[test]
    fn no_flips_gives_fallback_alpha() {
        let (cm, rm) = fixture(&[Fail, Pass], &[1], &[(1, &[Fail, Pass])]);
        assert_eq!(muse_alpha(&cm, &rm).unwrap(), 1.0);
    }

    #[test]
    fn lone_fix_without_breaks_gives_fallback_alpha() {
        let (cm, rm) = fixture(&[Fail, Pass], &[1], &[(1, &[Pass, Pass])]);
        assert_eq!(muse_alpha(&cm, &rm).unwrap(), 1.0);
    }

    #[test]
    fn alpha_balances_the_two_means() {
        // 5 failing, 5 passing. f2p total 3 -> fraction 0.6; p2f total 6 -> fraction 1.2.
        let orig = [Fail, Fail, Fail, Fail, Fail, Pass, Pass, Pass, Pass, Pass];
        let m1 = [Pass, Pass, Pass, Fail, Fail, Fail, Fail, Fail, Pass, Pass];
        let m2 = [Fail, Fail, Fail, Fail, Fail, Fail, Fail, Fail, Pass, Pass];
        let (cm, rm) = fixture(&orig, &[1, 2], &[(1, &m1), (2, &m2)]);
        assert!((muse_alpha(&cm, &rm).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sole_fixing_mutant_scores_one() {
        let (cm, rm) = fixture(&[Fail, Pass, Pass], &[1, 2], &[(1, &[Pass, Pass, Pass]), (2, &[Fail, Pass, Pass])]);
        let s = muse_scores(&cm, &rm, &MuseConfig::default()).unwrap();
        assert_eq!(s[&1], 1.0);
        assert_eq!(s[&2], 0.0);
    }

    #[test]
    fn hand_evaluated_score_with_fixed_alpha() {
        // |f_P| = 2, |p_P| = 2. Line 1 has two mutants:
        //   m0: fixes t0, breaks t2   -> 1/2 - a * 1/2
        //   m1: fixes t0 and t1       -> 2/2
        // mu = (1/2 - a/2 + 1) / 2 with a = 0.5 -> 0.625
        let orig = [Fail, Fail, Pass, Pass];
        let (cm, rm) = fixture(&orig, &[1], &[(1, &[Pass, Fail, Fail, Pass]), (1, &[Pass, Pass, Pass, Pass])]);
        let s = muse_scores(&cm, &rm, &MuseConfig { alpha: Alpha::Fixed(0.5) }).unwrap();
        assert!((s[&1] - 0.625).abs() < 1e-12);
    }

    #[test]
    fn auto_alpha_matches_the_float_formula() {
        let orig = [Fail, Fail, Pass, Pass, Pass];
        let rows: [(u32, &[Verdict]); 4] = [
            (1, &[Pass, Fail, Fail, Pass, Pass]),
            (1, &[Fail, Fail, Fail, Fail, Pass]),
            (2, &[Pass, Pass, Pass, Pass, Fail]),
            (3, &[Fail, Fail, Pass, Pass, Pass]),
        ];
        let (cm, rm) = fixture(&orig, &[1, 2, 3, 4], &rows);
        let alpha = muse_alpha(&cm, &rm).unwrap();
        // f2p total 3 over |f|=2 -> 1.5; p2f total 4 over |p|=3 -> 4/3; alpha = 9/8.
        assert!((alpha - 1.125).abs() < 1e-12);
        let s = muse_scores(&cm, &rm, &MuseConfig::default()).unwrap();
        let direct = |fixes: f64, breaks: f64, m: f64| (fixes / 2.0 - alpha * breaks / 3.0) / m;
        assert!((s[&1] - direct(1.0, 3.0, 2.0)).abs() < 1e-12);
        assert!((s[&2] - direct(2.0, 1.0, 1.0)).abs() < 1e-12);
        assert_eq!(s[&3], 0.0);
        assert_eq!(s[&4], f64::NEG_INFINITY);
    }

    #[test]
    fn flips_outside_coverage_are_ignored() {
        let (mut cm, rm) = fixture(&[Fail, Pass], &[1, 2], &[(2, &[Pass, Pass])]);
        cm.cells[0][1] = false;
        let s = muse_scores(&cm, &rm, &MuseConfig::default()).unwrap();
        assert_eq!(s[&2], 0.0);
        assert_eq!(flip_counts(&cm, &rm).unwrap()[&2].mut_s, 1);
    }

    #[test]
    fn needs_both_verdicts() {
        let (cm, rm) = fixture(&[Fail], &[1], &[(1, &[Pass])]);
        assert_eq!(muse_scores(&cm, &rm, &MuseConfig::default()), Err(ExecutionError::NoPassingTests));
        let (cm, rm) = fixture(&[Pass], &[1], &[(1, &[Fail])]);
        assert_eq!(muse_alpha(&cm, &rm), Err(ExecutionError::NoFailingTests));
    }
}
