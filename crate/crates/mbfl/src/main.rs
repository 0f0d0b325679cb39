use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mbfl::pipeline::{self, parse_alpha, parse_operators, read_program, RunConfig};
use mbfl::{formats, Error, Result};
use mbfl_core::localization::Technique;
use mbfl_core::minilang::{run, StepBudget};
use mbfl_core::mutation::UomForms;

/// Mutation-based fault localization for mini-language programs.
#[derive(Parser)]
#[command(name = "mbfl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MutateArgs {
    /// `all`, `none`, or a comma-separated list such as `AOR,ROR,UOM`.
    #[arg(long, default_value = "all")]
    operators: String,
    /// Restrict UOM to `v + 1` and `v - 1` at variable reads.
    #[arg(long)]
    uom_increment_only: bool,
}

#[derive(Args)]
struct ExecArgs {
    /// Step budget per test execution.
    #[arg(long, default_value_t = StepBudget::DEFAULT.get())]
    budget: u64,
    /// Worker threads for mutant execution (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct AlphaArg {
    /// MUSE balancing factor: `auto` or a non-negative number.
    #[arg(long, default_value = "auto")]
    alpha: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum TechniqueArg {
    Metallaxis,
    Muse,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and prune mutants of a program.
    Mutate {
        program: PathBuf,
        #[command(flatten)]
        mutate: MutateArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the original program and its mutants against a test suite.
    Run {
        program: PathBuf,
        tests: PathBuf,
        #[command(flatten)]
        exec: ExecArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank lines by suspiciousness from the matrices in a run directory.
    Localize {
        #[arg(long, value_enum)]
        technique: TechniqueArg,
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score the rankings of every bug in a manifest.
    Evaluate {
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mutate, run, localize and evaluate every bug in a manifest.
    Pipeline {
        manifest: PathBuf,
        #[command(flatten)]
        mutate: MutateArgs,
        #[command(flatten)]
        exec: ExecArgs,
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a program on one input and print its output.
    Exec {
        program: PathBuf,
        #[arg(allow_negative_numbers = true)]
        inputs: Vec<i64>,
        #[arg(long, default_value_t = StepBudget::DEFAULT.get())]
        budget: u64,
    },
}

fn budget(steps: u64) -> Result<StepBudget> {
    StepBudget::new(steps).ok_or_else(|| Error::Usage("--budget must be at least 1".into()))
}

fn config(mutate: Option<&MutateArgs>, exec: Option<&ExecArgs>, alpha: Option<&AlphaArg>) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(m) = mutate {
        cfg.operators = parse_operators(&m.operators)?;
        if m.uom_increment_only {
            cfg.operators.uom_forms = UomForms::IncrementOnly;
        }
        if cfg.operators.is_empty() {
            eprintln!("warning: no mutation operators enabled; no mutants will be generated");
        }
    }
    if let Some(e) = exec {
        cfg.budget = budget(e.budget)?;
        cfg.jobs = match e.jobs {
            Some(0) => return Err(Error::Usage("--jobs must be at least 1".into())),
            Some(j) => j,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
    }
    if let Some(a) = alpha {
        cfg.alpha = parse_alpha(&a.alpha)?;
    }
    Ok(cfg)
}

fn technique(t: TechniqueArg) -> Technique {
    match t {
        TechniqueArg::Metallaxis => Technique::Metallaxis,
        TechniqueArg::Muse => Technique::Muse,
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mutate { program, mutate, out } => {
            let cfg = config(Some(&mutate), None, None)?;
            let s = pipeline::mutate(&program, &cfg, &out)?;
            println!(
                "generated {}, equivalent {}, duplicates removed {}, retained {}",
                s.generated, s.equivalent, s.duplicates_removed, s.retained
            );
        }
        Command::Run { program, tests, exec, out } => {
            let cfg = config(None, Some(&exec), None)?;
            let s = pipeline::run(&program, &tests, &cfg, &out)?;
            println!(
                "retained {}, killed {}, live {}, mutation score {:.3}",
                s.retained, s.killed, s.dormant, s.mutation_score
            );
        }
        Command::Localize { technique: t, alpha, out } => {
            let cfg = config(None, None, Some(&alpha))?;
            let ranking = pipeline::localize(&out, technique(t), &cfg)?;
            print!("{}", formats::write_ranking(&ranking));
        }
        Command::Evaluate { manifest, out } => {
            let bundles = formats::read_manifest(&manifest)?;
            let report = pipeline::evaluate(&bundles, &out)?;
            print!("{}", mbfl::report::to_text(&report));
        }
        Command::Pipeline { manifest, mutate, exec, alpha, out } => {
            let cfg = config(Some(&mutate), Some(&exec), Some(&alpha))?;
            let report = pipeline::pipeline(&manifest, &cfg, &out)?;
            print!("{}", mbfl::report::to_text(&report));
        }
        Command::Exec { program, inputs, budget: steps } => {
            let p = read_program(&program)?;
            if inputs.len() != p.params().len() {
                return Err(Error::Usage(format!("program takes {} inputs, got {}", p.params().len(), inputs.len())));
            }
            let o = run(&p, &inputs, budget(steps)?);
            let out: Vec<String> = o.output.iter().map(i64::to_string).collect();
            println!("{}", out.join(" "));
            eprintln!("status: {}, steps: {}", o.status.as_str(), o.steps_used);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
