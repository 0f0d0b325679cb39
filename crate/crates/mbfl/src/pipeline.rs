//! The pipeline stages. Each stage reads its inputs from files and writes its
//! outputs to a per-bug directory, so any stage can be rerun on its own:
//!
//! | stage | reads | writes |
//! |-------|-------|--------|
//! | mutate | program | `mutants.tsv`, `pruned.tsv`, `generation.json` |
//! | run | program, tests, `mutants.tsv`, `generation.json` | `coverage.csv`, `verdicts.csv`, `results.csv`, `results_diff.csv`, `stats.json` |
//! | localize | matrices, `mutants.tsv` | `ranking_<technique>.tsv` |
//! | evaluate | manifest, fault files, rankings, `coverage.csv`, `stats.json` | `report.json`, `report.txt` |

use std::collections::BTreeMap;
use std::path::Path;

use mbfl_core::evaluation::{evaluate_ranking, optimal_ranking, BugResult, Report};
use mbfl_core::execution::{coverage_from_outcomes, mutation_score, run_original, MutationStats, ResultMatrix};
use mbfl_core::localization::{metallaxis_scores, muse_scores, rank_with_ties, retie, Alpha, MuseConfig, Ranking, Technique};
use mbfl_core::minilang::{parse, Program, StepBudget};
use mbfl_core::mutation::{generate_mutants, prune_duplicates, GenerationStats, OperatorId, OperatorSet};

use crate::error::{Error, Result};
use crate::formats::{self, BugBundle};
use crate::parallel::run_mutant_rows;
use crate::report;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub operators: OperatorSet,
    pub budget: StepBudget,
    pub alpha: Alpha,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { operators: OperatorSet::all(), budget: StepBudget::DEFAULT, alpha: Alpha::Auto, jobs: 1 }
    }
}

/// `all`, `none`, or a comma-separated list of operator names.
pub fn parse_operators(spec: &str) -> Result<OperatorSet> {
    match spec.trim() {
        "all" => return Ok(OperatorSet::all()),
        "" | "none" => return Ok(OperatorSet::none()),
        _ => {}
    }
    let ops = spec
        .split(',')
        .map(|s| s.trim().parse::<OperatorId>().map_err(|e| Error::Usage(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSet::only(&ops))
}

pub fn parse_alpha(spec: &str) -> Result<Alpha> {
    if spec == "auto" {
        return Ok(Alpha::Auto);
    }
    match spec.parse::<f64>() {
        Ok(a) if a.is_finite() && a >= 0.0 => Ok(Alpha::Fixed(a)),
        _ => Err(Error::Usage(format!("alpha must be `auto` or a non-negative number, not `{spec}`"))),
    }
}

pub fn read_program(path: &Path) -> Result<Program> {
    let text = formats::read_text(path)?;
    Ok(parse(&path.display().to_string(), &text)?)
}

pub fn mutate(program_path: &Path, cfg: &RunConfig, dir: &Path) -> Result<GenerationStats> {
    let program = read_program(program_path)?;
    let set = prune_duplicates(generate_mutants(&program, &cfg.operators));
    formats::write_text(&dir.join(formats::MUTANTS), &formats::write_mutant_listing(&set.mutants))?;
    formats::write_text(&dir.join(formats::PRUNED), &formats::write_pruned_listing(&set.pruned))?;
    formats::write_json(&dir.join(formats::GENERATION), &set.stats)?;
    Ok(set.stats)
}

pub fn run(program_path: &Path, tests_path: &Path, cfg: &RunConfig, dir: &Path) -> Result<MutationStats> {
    let program = read_program(program_path)?;
    let suite = formats::read_suite(tests_path)?;
    suite.check_arity(&program).map_err(|source| Error::Suite { path: tests_path.to_path_buf(), source })?;
    let mutants = formats::read_mutants(&dir.join(formats::MUTANTS), &program)?;
    let generation: GenerationStats = formats::read_json(&dir.join(formats::GENERATION))?;
    if generation.retained != mutants.len() {
        return Err(Error::Usage(format!(
            "{} lists {} mutants but {} records {}",
            formats::MUTANTS,
            mutants.len(),
            formats::GENERATION,
            generation.retained
        )));
    }

    let original = run_original(&program, &suite, cfg.budget)
        .map_err(|source| Error::Suite { path: tests_path.to_path_buf(), source })?;
    let cm = coverage_from_outcomes(&program, &suite, &original);
    let rows = run_mutant_rows(&mutants, &suite, &original, cfg.budget, cfg.jobs)?;
    let rm = ResultMatrix { tests: suite.ids(), rows };

    let set = mbfl_core::mutation::MutantSet { original: program, mutants, pruned: Vec::new(), stats: generation };
    let stats = mutation_score(&set, &rm);
    formats::write_coverage(dir, &cm)?;
    formats::write_results(dir, &rm)?;
    formats::write_json(&dir.join(formats::STATS), &stats)?;
    Ok(stats)
}

pub fn localize(dir: &Path, technique: Technique, cfg: &RunConfig) -> Result<Ranking> {
    let cm = formats::read_coverage(dir)?;
    let listing_path = dir.join(formats::MUTANTS);
    let listing = formats::parse_mutant_listing(&listing_path, &formats::read_text(&listing_path)?)?;
    let lines: BTreeMap<String, u32> = listing.into_iter().map(|m| (m.id, m.line)).collect();
    let rm = formats::read_results(dir, &lines)?;
    let scores = match technique {
        Technique::Metallaxis => metallaxis_scores(&cm, &rm)?,
        Technique::Muse => muse_scores(&cm, &rm, &MuseConfig { alpha: cfg.alpha })?,
        Technique::Optimal => {
            return Err(Error::Usage("the optimal ranking needs fault locations; it is produced by `evaluate`".into()))
        }
    };
    let ranking = rank_with_ties(technique, &scores, None);
    formats::write_text(&dir.join(formats::ranking_file(technique)), &formats::write_ranking(&ranking))?;
    Ok(ranking)
}

/// Scores the rankings found under `runs/<bug-id>/` and writes the report
/// files to `runs`.
pub fn evaluate(bundles: &[BugBundle], runs: &Path) -> Result<Report> {
    let mut results: Vec<BugResult> = Vec::new();
    let mut mutation = BTreeMap::new();
    for b in bundles {
        let faults = formats::read_faults(&b.faults)?;
        if faults.bug_id != b.id {
            return Err(Error::Usage(format!(
                "{} names bug `{}` but the manifest calls it `{}`",
                b.faults.display(),
                faults.bug_id,
                b.id
            )));
        }
        let dir = runs.join(&b.id);
        let sloc = formats::read_coverage(&dir)?.lines;
        faults.check_against(&sloc)?;
        let mut found = false;
        for technique in [Technique::Metallaxis, Technique::Muse] {
            let path = dir.join(formats::ranking_file(technique));
            if !path.exists() {
                continue;
            }
            found = true;
            let ranking = formats::read_ranking(&path)?;
            results.push(evaluate_ranking(&retie(&ranking, &faults.faulty_lines), &faults)?);
        }
        if !found {
            return Err(Error::Usage(format!("no rankings in {}; run `localize` first", dir.display())));
        }
        results.push(evaluate_ranking(&optimal_ranking(&sloc, &faults), &faults)?);
        let stats: MutationStats = formats::read_json(&dir.join(formats::STATS))?;
        mutation.insert(b.id.clone(), stats);
    }
    let report = Report::new(results, mutation)?;
    formats::write_text(&runs.join("report.json"), &report::to_json(&report)?)?;
    formats::write_text(&runs.join("report.txt"), &report::to_text(&report))?;
    Ok(report)
}

/// Every stage for every bug in the manifest, then the evaluation.
pub fn pipeline(manifest: &Path, cfg: &RunConfig, out: &Path) -> Result<Report> {
    let bundles = formats::read_manifest(manifest)?;
    for b in &bundles {
        let dir = out.join(&b.id);
        mutate(&b.program, cfg, &dir)?;
        run(&b.program, &b.tests, cfg, &dir)?;
        localize(&dir, Technique::Metallaxis, cfg)?;
        localize(&dir, Technique::Muse, cfg)?;
    }
    evaluate(&bundles, out)
}
