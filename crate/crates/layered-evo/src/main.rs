use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use layered_evo::error::{Error, Result};
use layered_evo::evolution::EvolutionConfig;
use layered_evo::experiments::{
    self, cross_test, read_history, registry, write_history, RunOptions,
};
use layered_evo::neuro::LayeredGenome;
use layered_evo::sim::{write_trace, WorldParams};
use layered_evo::tasks::{run_trial_traced, TaskKind, TaskSpec};

#[derive(Parser)]
#[command(
    name = "layered-evo",
    version,
    about = "Layered neuroevolution workbench for a light-seeking robot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and write its report files.
    Run(RunArgs),
    /// Average several history CSVs into one.
    Aggregate(AggregateArgs),
    /// Evaluate a saved genome over fresh trials, no evolution.
    CrossTest(CrossTestArgs),
    /// Replay one trial of a saved genome into a trajectory CSV.
    Replay(ReplayArgs),
    /// List the experiment registry.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Registry name, e.g. layered-1 (see `list`).
    #[arg(long)]
    experiment: String,
    /// Output root; files land in <out>/<experiment>/.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// JSON file with EvolutionConfig fields; omitted fields keep defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<u32>,
    /// Generations per schedule span.
    #[arg(long)]
    generations: Option<u32>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    /// Share trial seeds across the population each generation.
    #[arg(long)]
    common_trials: Option<bool>,
    /// Evaluation threads; results are identical for any value.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write per-trial scores to <run>/audit.csv.
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct AggregateArgs {
    /// History CSVs of equal length.
    #[arg(required = true)]
    histories: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CrossTestArgs {
    #[arg(long)]
    genome: PathBuf,
    /// phototaxis, phototaxis-obstacles, learning or learning-obstacles.
    #[arg(long)]
    task: TaskKind,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the task's default step count.
    #[arg(long)]
    steps: Option<u32>,
    /// Draw targets 2:1 in favour of light 0.
    #[arg(long)]
    biased: bool,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    genome: PathBuf,
    #[arg(long)]
    task: TaskKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace CSV destination.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    steps: Option<u32>,
    #[arg(long)]
    biased: bool,
}

fn task_spec(kind: TaskKind, steps: Option<u32>, biased: bool) -> TaskSpec {
    let mut task = TaskSpec::new(kind);
    if let Some(steps) = steps {
        task = task.with_steps(steps);
    }
    if biased {
        task = task.biased();
    }
    task
}

fn load_config(args: &RunArgs) -> Result<EvolutionConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::json(format!("parsing {}", path.display()), e))?
        }
        None => EvolutionConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(runs) = args.runs {
        cfg.runs = runs;
    }
    if let Some(generations) = args.generations {
        cfg.generations = generations;
    }
    if let Some(rate) = args.mutation_rate {
        cfg.mutation_rate = rate;
    }
    if let Some(common) = args.common_trials {
        cfg.common_trials = common;
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let def = experiments::find(&args.experiment)?;
            let cfg = load_config(&args)?;
            let opts = RunOptions { threads: args.threads, audit: args.audit };
            let report =
                experiments::run_experiment(&def, &cfg, &WorldParams::default(), &args.out, &opts)?;
            println!(
                "{}: {} runs -> {}",
                report.experiment,
                cfg.runs,
                report.out_dir.display()
            );
            if let (Some(best), Some(mean)) = (
                mean(&report.final_best),
                mean(&report.final_mean),
            ) {
                println!("final best (mean over runs): {best:.4}");
                println!("final mean (mean over runs): {mean:.4}");
            }
            Ok(())
        }
        Command::Aggregate(args) => {
            let mut histories = Vec::new();
            for path in &args.histories {
                histories.push(read_history(path)?);
            }
            let rows = experiments::aggregate(&histories)?;
            write_history(&args.out, &rows)?;
            println!("aggregated {} histories -> {}", histories.len(), args.out.display());
            Ok(())
        }
        Command::CrossTest(args) => {
            let genome = LayeredGenome::load(&args.genome)?;
            let task = task_spec(args.task, args.steps, args.biased);
            let stats =
                cross_test(&genome, &task, &WorldParams::default(), args.trials, args.seed)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&stats)
                    .map_err(|e| Error::json("serializing stats", e))?
            );
            Ok(())
        }
        Command::Replay(args) => {
            let genome = LayeredGenome::load(&args.genome)?;
            let task = task_spec(args.task, args.steps, args.biased);
            let (result, trace) =
                run_trial_traced(&genome, &task, &WorldParams::default(), args.seed)?;
            let file = std::fs::File::create(&args.out)
                .map_err(|e| Error::io(format!("creating {}", args.out.display()), e))?;
            write_trace(std::io::BufWriter::new(file), &trace)?;
            println!(
                "{} steps, score {} -> {}",
                result.steps_run,
                result.score,
                args.out.display()
            );
            Ok(())
        }
        Command::List => {
            for def in registry() {
                let tasks: Vec<&str> = def.tasks.iter().map(|t| t.kind.name()).collect();
                println!(
                    "{:24} {:18} {:18} {}",
                    def.name,
                    def.architecture.name(),
                    def.regime.name(),
                    tasks.join(" then ")
                );
                println!("{:24} {}", "", def.description);
            }
            Ok(())
        }
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
