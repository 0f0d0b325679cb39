//! Acceptance criteria. Runs without the libtest harness so that one
//! `AC<n> PASS|FAIL` line per criterion always reaches the output.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mbfl::formats;
use mbfl::pipeline::{self, RunConfig};
use mbfl_core::evaluation::{ap, evaluate_ranking, evaluate_scores, map_metric, mps, optimal_ranking, ps, FaultSpec};
use mbfl_core::execution::{CoverageMatrix, MutantRow, ResultCell, ResultMatrix};
use mbfl_core::localization::{
    metallaxis_scores, muse_alpha, muse_scores, ochiai, rank_with_ties, Alpha, KillStats, MuseConfig, Scores, Technique,
};
use mbfl_core::minilang::{execute, StepBudget, Verdict};
use mbfl_core::mutation::{generate_mutants, prune_duplicates, OperatorSet};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn manifest() -> PathBuf {
    workspace().join("corpus/manifest.txt")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((a - b).abs() <= tol || (a == b), || format!("{what}: got {a}, expected {b}"))
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bug = workspace().join("corpus/median");
    let cfg = RunConfig { operators: OperatorSet::increment_only(), ..RunConfig::default() };
    let err = |e: mbfl::Error| e.to_string();
    pipeline::mutate(&bug.join("program.mini"), &cfg, dir.path()).map_err(err)?;
    pipeline::run(&bug.join("program.mini"), &bug.join("tests.txt"), &cfg, dir.path()).map_err(err)?;
    let faults = formats::read_faults(&bug.join("fault.txt")).map_err(err)?;
    let cm = formats::read_coverage(dir.path()).map_err(err)?;
    ensure(cm.passing_count() == 5 && cm.failing_count() == 1, || "expected 5 passing and 1 failing test".into())?;

    let mut ranks = Vec::new();
    for t in [Technique::Metallaxis, Technique::Muse] {
        let r = pipeline::localize(dir.path(), t, &cfg).map_err(err)?;
        let r = mbfl_core::localization::retie(&r, &faults.faulty_lines);
        ranks.push(evaluate_ranking(&r, &faults).map_err(|e| e.to_string())?.best_rank);
    }
    let elapsed = start.elapsed();
    ensure(ranks[0] == 1, || format!("metallaxis ranks the fault {}", ranks[0]))?;
    ensure(ranks[1] > 1, || format!("muse ranks the fault {}", ranks[1]))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("median: metallaxis rank {}, muse rank {} ({} ms)", ranks[0], ranks[1], elapsed.as_millis()))
}

fn ac2(corpus_report: &mbfl_core::evaluation::Report) -> Outcome {
    let opt = corpus_report.summary(Technique::Optimal).ok_or("no optimal summary")?;
    let b = corpus_report.bugs.iter().filter(|r| r.technique == Technique::Optimal).count();
    for (n, count) in &opt.top_n {
        ensure(*count == b, || format!("optimal top-{n} = {count}, expected {b}"))?;
    }
    ensure(opt.map == 1.0, || format!("optimal MAP = {}", opt.map))?;
    for r in corpus_report.bugs.iter().filter(|r| r.technique == Technique::Optimal) {
        close(r.ps, (r.sloc - 1) as f64 / r.sloc as f64, 1e-12, &format!("PS of {}", r.bug_id))?;
    }

    // Synthetic corpora of every shape up to 12 lines.
    let mut synthetic = 0;
    for m in 1u32..=12 {
        let sloc: Vec<u32> = (1..=m).map(|l| l * 3).collect();
        for mask in 1u32..(1 << m.min(6)) {
            let faulty: Vec<u32> = (0..m.min(6)).filter(|i| mask & (1 << i) != 0).map(|i| sloc[i as usize]).collect();
            let f = FaultSpec::new("s", faulty).map_err(|e| e.to_string())?;
            let r = evaluate_ranking(&optimal_ranking(&sloc, &f), &f).map_err(|e| e.to_string())?;
            ensure(r.best_rank == 1 && r.ap == 1.0, || format!("optimal on m={m} mask={mask:b}: {r:?}"))?;
            close(r.ps, (m - 1) as f64 / m as f64, 1e-12, "synthetic PS")?;
            synthetic += 1;
        }
    }
    Ok(format!("{b} corpus bugs: top-N = {b} for all N, MAP = {:.3}; {synthetic} synthetic fault sets", opt.map))
}

struct Synthetic {
    verdicts: &'static str,
    coverage: &'static [(u32, &'static str)],
    mutants: &'static [(u32, &'static str, &'static str)],
    faulty: &'static [u32],
    alpha: Option<f64>,
}

fn verdicts(s: &str) -> Vec<Verdict> {
    s.chars().map(|c| if c == 'P' { Verdict::Pass } else { Verdict::Fail }).collect()
}

impl Synthetic {
    fn matrices(&self) -> (CoverageMatrix, ResultMatrix) {
        let tests: Vec<String> = (0..self.verdicts.len()).map(|i| format!("t{i}")).collect();
        let cm = CoverageMatrix {
            tests: tests.clone(),
            lines: self.coverage.iter().map(|(l, _)| *l).collect(),
            cells: (0..tests.len())
                .map(|t| self.coverage.iter().map(|(_, bits)| bits.as_bytes()[t] == b'1').collect())
                .collect(),
            original_verdicts: verdicts(self.verdicts),
        };
        let rows = self
            .mutants
            .iter()
            .enumerate()
            .map(|(i, (line, v, d))| MutantRow {
                id: format!("m{i}"),
                line: *line,
                cells: verdicts(v)
                    .into_iter()
                    .zip(d.chars())
                    .map(|(verdict, c)| ResultCell { verdict, output_differs: c == '1' })
                    .collect(),
            })
            .collect();
        (cm, ResultMatrix { tests, rows })
    }
}

const SYNTHETIC: [Synthetic; 5] = [
    Synthetic {
        verdicts: "FPP",
        coverage: &[(1, "111"), (2, "101")],
        mutants: &[(1, "PPP", "100"), (2, "FFP", "010")],
        faulty: &[1],
        alpha: None,
    },
    Synthetic {
        verdicts: "FFPPP",
        coverage: &[(1, "11111"), (2, "11110"), (3, "01111")],
        mutants: &[(1, "PFFPP", "10100"), (1, "FFPPP", "11000"), (2, "PPPPF", "11001"), (3, "FFFFF", "00111")],
        faulty: &[2],
        alpha: None,
    },
    Synthetic {
        verdicts: "PFPP",
        coverage: &[(1, "1111"), (2, "1111"), (3, "0110"), (4, "1001")],
        mutants: &[(1, "PFPP", "0100"), (1, "PPPP", "0100"), (1, "FFFP", "1010"), (3, "PPPP", "0100"), (4, "FFPF", "1001")],
        faulty: &[3],
        alpha: None,
    },
    Synthetic {
        verdicts: "FFPP",
        coverage: &[(1, "1111"), (2, "1111"), (3, "1111")],
        mutants: &[(1, "PFFP", "1010"), (1, "PPPP", "1100"), (2, "FFFF", "0011"), (3, "FFPP", "0000")],
        faulty: &[1, 3],
        alpha: Some(0.5),
    },
    Synthetic {
        verdicts: "FFPPPP",
        coverage: &[(1, "111111"), (2, "110000"), (3, "111111")],
        mutants: &[(1, "PFFFFP", "101110"), (2, "FFPPPP", "110000"), (2, "PFPPPP", "100000"), (3, "FFPPPP", "000000")],
        faulty: &[2],
        alpha: None,
    },
];

/// Expected values computed with exact rationals by a script that applies the
/// formulas directly: per-mutant Ochiai, Metallaxis and MUSE per line, the
/// balancing factor, and (best rank, PS, AP) for each technique.
struct Expected {
    ochiai: &'static [f64],
    metallaxis: &'static [f64],
    alpha: f64,
    muse: &'static [f64],
    meta_eval: (usize, f64, f64),
    muse_eval: (usize, f64, f64),
}

const EXPECTED: [Expected; 5] = [
    Expected {
        ochiai: &[1.0, 0.0],
        metallaxis: &[1.0, 0.0],
        alpha: 2.0,
        muse: &[1.0, 0.0],
        meta_eval: (1, 0.5, 1.0),
        muse_eval: (1, 0.5, 1.0),
    },
    Expected {
        ochiai: &[0.5, 1.0, 0.816_496_580_927_726_1, 0.0],
        metallaxis: &[1.0, 0.816_496_580_927_726_1, 0.0],
        alpha: 0.9,
        muse: &[0.1, 1.0, -0.9],
        meta_eval: (2, 1.0 / 3.0, 0.5),
        muse_eval: (1, 2.0 / 3.0, 1.0),
    },
    Expected {
        ochiai: &[1.0, 1.0, 0.0, 1.0, 0.0],
        metallaxis: &[1.0, 0.0, 1.0, 0.0],
        alpha: 1.5,
        muse: &[0.0, f64::NEG_INFINITY, 1.0, -1.0],
        meta_eval: (2, 0.5, 0.5),
        muse_eval: (1, 0.75, 1.0),
    },
    Expected {
        ochiai: &[0.5, 1.0, 0.0, 0.0],
        metallaxis: &[1.0, 0.0, 0.0],
        // Scores below use a fixed alpha of 1/2; this is the automatic value.
        alpha: 1.0,
        muse: &[0.625, -0.5, 0.0],
        meta_eval: (1, 2.0 / 3.0, 0.833_333_333_333_333_3),
        muse_eval: (1, 2.0 / 3.0, 1.0),
    },
    Expected {
        ochiai: &[0.353_553_390_593_273_73, 1.0, 0.707_106_781_186_547_5, 0.0],
        metallaxis: &[0.353_553_390_593_273_73, 1.0, 0.0],
        alpha: 4.0 / 3.0,
        muse: &[-0.5, 0.25, 0.0],
        meta_eval: (1, 2.0 / 3.0, 1.0),
        muse_eval: (1, 2.0 / 3.0, 1.0),
    },
];

fn ac3() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut checks = 0;
    let mut meta_ps = Vec::new();
    let mut meta_ap = Vec::new();
    let mut muse_ps = Vec::new();
    let mut muse_ap = Vec::new();
    for (i, (s, e)) in SYNTHETIC.iter().zip(&EXPECTED).enumerate() {
        let (cm, rm) = s.matrices();
        let tf = cm.failing_count();
        for (row, want) in rm.rows.iter().zip(e.ochiai) {
            let kills: Vec<usize> = (0..row.cells.len()).filter(|t| row.cells[*t].output_differs).collect();
            let failed_k = kills.iter().filter(|t| !cm.original_verdicts[**t].is_pass()).count();
            let ks = KillStats { mutant: row.id.clone(), failed_k, passed_k: kills.len() - failed_k, totfailed: tf };
            close(ochiai(&ks), *want, TOL, &format!("matrix {i} ochiai {}", row.id))?;
            checks += 1;
        }
        let meta = metallaxis_scores(&cm, &rm).map_err(|e| e.to_string())?;
        for (line, want) in cm.lines.iter().zip(e.metallaxis) {
            close(meta[line], *want, TOL, &format!("matrix {i} metallaxis line {line}"))?;
            checks += 1;
        }
        close(muse_alpha(&cm, &rm).map_err(|e| e.to_string())?, e.alpha, TOL, &format!("matrix {i} alpha"))?;
        let alpha = s.alpha.map_or(Alpha::Auto, Alpha::Fixed);
        let muse = muse_scores(&cm, &rm, &MuseConfig { alpha }).map_err(|e| e.to_string())?;
        for (line, want) in cm.lines.iter().zip(e.muse) {
            close(muse[line], *want, TOL, &format!("matrix {i} muse line {line}"))?;
            checks += 1;
        }
        let faults = FaultSpec::new(format!("m{i}"), s.faulty.iter().copied()).map_err(|e| e.to_string())?;
        for (scores, want, t, ps_acc, ap_acc) in [
            (&meta, e.meta_eval, Technique::Metallaxis, &mut meta_ps, &mut meta_ap),
            (&muse, e.muse_eval, Technique::Muse, &mut muse_ps, &mut muse_ap),
        ] {
            let (ranking, r) = evaluate_scores(t, scores, &faults).map_err(|e| e.to_string())?;
            ensure(r.best_rank == want.0, || format!("matrix {i} {t} rank {} != {}", r.best_rank, want.0))?;
            close(r.ps, want.1, TOL, &format!("matrix {i} {t} PS"))?;
            close(ap(&ranking, &faults).map_err(|e| e.to_string())?, want.2, TOL, &format!("matrix {i} {t} AP"))?;
            ps_acc.push(r.ps);
            ap_acc.push(r.ap);
            checks += 3;
        }
    }
    let err = |e: mbfl_core::evaluation::EvaluationError| e.to_string();
    close(mps(&meta_ps).map_err(err)?, 0.533_333_333_333_333_3, TOL, "metallaxis MPS")?;
    close(map_metric(&meta_ap).map_err(err)?, 0.766_666_666_666_666_6, TOL, "metallaxis MAP")?;
    close(mps(&muse_ps).map_err(err)?, 0.65, TOL, "muse MPS")?;
    close(map_metric(&muse_ap).map_err(err)?, 1.0, TOL, "muse MAP")?;

    // Stand-alone hand values.
    let ks = |f, p, t| KillStats { mutant: String::new(), failed_k: f, passed_k: p, totfailed: t };
    close(ochiai(&ks(1, 0, 1)), 1.0, TOL, "ochiai(1,0,1)")?;
    close(ochiai(&ks(0, 5, 1)), 0.0, TOL, "ochiai(0,5,1)")?;
    close(ochiai(&ks(1, 3, 2)), 0.353_55, 1e-5, "ochiai(1,3,2)")?;
    close(ps(1, 64), 0.984_375, TOL, "ps(1,64)")?;
    close(ps(7, 7), 0.0, TOL, "ps(M,M)")?;
    close(mps(&[0.8, 0.6]).map_err(err)?, 0.7, TOL, "mean")?;
    ensure(mps(&[]).is_err(), || "mean of nothing".into())?;
    checks += 19;
    Ok(format!("{checks} values over {} synthetic matrices within 1e-9", SYNTHETIC.len()))
}

fn ranks(r: &mbfl_core::localization::Ranking) -> Vec<(u32, usize)> {
    r.entries.iter().map(|e| (e.line, e.rank)).collect()
}

fn scores(pairs: &[(u32, f64)]) -> Scores {
    pairs.iter().copied().collect()
}

fn ac4() -> Outcome {
    let cases: [(&str, Scores, Vec<u32>, Vec<(u32, usize)>); 7] = [
        (
            "n=4 at 3..6, k=2",
            scores(&[(1, 0.9), (2, 0.8), (3, 0.5), (4, 0.5), (5, 0.5), (6, 0.5), (7, 0.1)]),
            vec![4, 6],
            vec![(1, 1), (2, 2), (3, 5), (4, 5), (5, 5), (6, 5), (7, 7)],
        ),
        ("n=3 at 1..3, k=1", scores(&[(1, 0.7), (2, 0.7), (3, 0.7), (4, 0.1)]), vec![2], vec![(1, 3), (2, 3), (3, 3), (4, 4)]),
        ("all tied, k=0", scores(&[(1, 0.2), (2, 0.2), (3, 0.2)]), vec![], vec![(1, 3), (2, 3), (3, 3)]),
        ("all tied, k=2", scores(&[(1, 0.2), (2, 0.2), (3, 0.2), (4, 0.2)]), vec![1, 4], vec![(1, 3), (2, 3), (3, 3), (4, 3)]),
        ("k=n", scores(&[(1, 0.1), (2, 0.9), (3, 0.9)]), vec![2, 3], vec![(2, 1), (3, 1), (1, 3)]),
        ("k=0 group above the fault", scores(&[(1, 0.9), (2, 0.9), (3, 0.4)]), vec![3], vec![(1, 2), (2, 2), (3, 3)]),
        ("distinct", scores(&[(1, 0.3), (2, 0.9), (3, 0.6)]), vec![1], vec![(2, 1), (3, 2), (1, 3)]),
    ];
    for (name, s, faulty, want) in &cases {
        let f: BTreeSet<u32> = faulty.iter().copied().collect();
        let got = ranks(&rank_with_ties(Technique::Metallaxis, s, Some(&f)));
        ensure(&got == want, || format!("{name}: got {got:?}, expected {want:?}"))?;
    }
    let plain = ranks(&rank_with_ties(Technique::Muse, &cases[0].1, None));
    ensure(plain[2..6].iter().all(|(_, r)| *r == 6), || format!("upper rank without faults: {plain:?}"))?;
    Ok(format!("{} tie cases exact", cases.len() + 1))
}

fn ac5() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 500, failure_persistence: None, ..Config::default() });
    let strategy = (
        prop::collection::btree_map(1u32..80, (-6i32..7).prop_map(|v| v as f64 / 3.0), 1..50),
        prop::collection::btree_set(1u32..80, 0..4),
    );
    let transforms: [(&str, fn(f64) -> f64); 4] =
        [("affine", |x| 2.5 * x - 4.0), ("exp", f64::exp), ("cube", |x| x * x * x), ("atan", |x| x.atan() + 10.0)];
    let cases = std::cell::Cell::new(0usize);
    runner
        .run(&strategy, |(s, faulty)| {
            let base = rank_with_ties(Technique::Metallaxis, &s, Some(&faulty));
            for (_, t) in transforms {
                let moved: Scores = s.iter().map(|(l, v)| (*l, t(*v))).collect();
                prop_assert_eq!(ranks(&base), ranks(&rank_with_ties(Technique::Metallaxis, &moved, Some(&faulty))));
            }
            cases.set(cases.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{} random score maps x {} increasing transforms", cases.get(), transforms.len()))
}

fn ac6() -> Outcome {
    let bundles = formats::read_manifest(&manifest()).map_err(|e| e.to_string())?;
    let budget = StepBudget::DEFAULT;
    let (mut pruned, mut compared) = (0, 0);
    for b in &bundles {
        let program = pipeline::read_program(&b.program).map_err(|e| e.to_string())?;
        let suite = formats::read_suite(&b.tests).map_err(|e| e.to_string())?;
        let set = prune_duplicates(generate_mutants(&program, &OperatorSet::all()));
        let by_id: BTreeMap<&str, _> = set.mutants.iter().map(|m| (m.id.as_str(), &m.program)).collect();
        for p in &set.pruned {
            let rep = match &p.representative {
                Some(id) => *by_id.get(id.as_str()).ok_or(format!("{}: representative {id} missing", b.id))?,
                None => &program,
            };
            for t in suite.tests() {
                let a = execute(&p.mutant.program, t, budget).map_err(|e| e.to_string())?;
                let r = execute(rep, t, budget).map_err(|e| e.to_string())?;
                ensure(a.status == r.status && a.output == r.output, || {
                    format!("{}/{} differs from {:?} on {}", b.id, p.mutant.id, p.representative, t.id)
                })?;
                compared += 1;
            }
            pruned += 1;
        }
    }
    ensure(pruned > 0, || "nothing was pruned".into())?;
    Ok(format!("{pruned} pruned mutants match their representatives on all {compared} executions"))
}

fn files_under(dir: &Path) -> std::io::Result<BTreeMap<PathBuf, Vec<u8>>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap_or(&path).to_path_buf(), fs::read(&path)?);
            }
        }
    }
    Ok(out)
}

fn ac7(one: &Path, four: &Path) -> Outcome {
    let a = files_under(one).map_err(|e| e.to_string())?;
    let b = files_under(four).map_err(|e| e.to_string())?;
    ensure(a.keys().eq(b.keys()), || "the two runs wrote different files".into())?;
    for (path, bytes) in &a {
        ensure(b[path] == *bytes, || format!("{} differs between --jobs 1 and --jobs 4", path.display()))?;
    }
    Ok(format!("{} files byte-identical with 1 and 4 jobs", a.len()))
}

fn ac8(report: &mbfl_core::evaluation::Report, elapsed: Duration) -> Outcome {
    let bugs = report.mutation.len();
    let retained: usize = report.mutation.values().map(|m| m.retained).sum();
    ensure(bugs >= 10, || format!("only {bugs} bugs"))?;
    ensure(retained >= 500, || format!("only {retained} retained mutants"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("pipeline took {elapsed:?}"))?;
    Ok(format!("{bugs} bugs, {retained} retained mutants in {:.2} s", elapsed.as_secs_f64()))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, &str, Outcome)> = Vec::new();
    results.push(("AC1", "median divergence", ac1()));

    let one = tempfile::tempdir().expect("tempdir");
    let four = tempfile::tempdir().expect("tempdir");
    let start = Instant::now();
    let run1 = pipeline::pipeline(&manifest(), &RunConfig { jobs: 1, ..RunConfig::default() }, one.path());
    let elapsed = start.elapsed();
    let run4 = pipeline::pipeline(&manifest(), &RunConfig { jobs: 4, ..RunConfig::default() }, four.path());

    match &run1 {
        Ok(report) => results.push(("AC2", "optimal baseline", ac2(report))),
        Err(e) => results.push(("AC2", "optimal baseline", Err(format!("pipeline failed: {e}")))),
    }
    results.push(("AC3", "formula oracles", ac3()));
    results.push(("AC4", "tie-break rules", ac4()));
    results.push(("AC5", "ranking invariance", ac5()));
    results.push(("AC6", "pruning soundness", ac6()));
    let ac7_result = match (&run1, &run4) {
        (Ok(_), Ok(_)) => ac7(one.path(), four.path()),
        (Err(e), _) | (_, Err(e)) => Err(format!("pipeline failed: {e}")),
    };
    results.push(("AC7", "determinism under parallelism", ac7_result));
    match &run1 {
        Ok(report) => results.push(("AC8", "desk-scale performance", ac8(report, elapsed))),
        Err(e) => results.push(("AC8", "desk-scale performance", Err(format!("pipeline failed: {e}")))),
    }

    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("{id} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
