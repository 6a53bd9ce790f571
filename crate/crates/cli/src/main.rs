use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hidden_partition::cluster::Partition;
use hidden_partition::diagnostics::{self, Constants, TailReport};
use hidden_partition::experiment::{self, ExperimentConfig};
use hidden_partition::model::sample_graph;

#[derive(Parser)]
#[command(name = "hidpart", version, about = "Planted partition recovery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte Carlo experiment described by a config file.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Repeat an experiment over values of one scenario parameter.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Scenario parameter to vary (e.g. `s`, `q`, `n`).
        #[arg(long)]
        axis: String,
        /// Comma-separated parameter values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Run diagnostic checks (all of them when none are named).
    Diag {
        checks: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        constants: ConstantArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample one graph from a config's scenario and write its edge list.
    Gen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the planted partition (`vertex label` lines).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `base_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `trials`.
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides the essential-rank constant.
    #[arg(long)]
    c3: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConstantArgs {
    #[arg(long, default_value_t = 3.0)]
    c0: f64,
    #[arg(long, default_value_t = 4.0)]
    c1: f64,
    #[arg(long, default_value_t = 4.0)]
    c2: f64,
    #[arg(long, default_value_t = 4.0)]
    c3: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Result of a command that ran to completion.
enum Verdict {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<Verdict> {
    match command {
        Command::Run { exp } => {
            let config = load_config(&exp)?;
            let result = experiment::run_experiment(&config)?;
            let text = match exp.output.format {
                Format::Json => experiment::to_json_lines(&result),
                Format::Csv => experiment::to_csv(&result),
            };
            emit(exp.output.out.as_deref(), &text)?;
            eprintln!("{}", serde_json::to_string(&result.summary)?);
            Ok(if result.passes(&config) { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Sweep { exp, axis, values } => {
            let config = load_config(&exp)?;
            let rows = experiment::run_sweep(&config, &axis, &values)?;
            let text = match exp.output.format {
                Format::Json => experiment::sweep_to_json_lines(&rows),
                Format::Csv => experiment::sweep_to_csv(&rows),
            };
            emit(exp.output.out.as_deref(), &text)?;
            Ok(Verdict::Pass)
        }
        Command::Diag { checks, seed, constants, output } => {
            let suite = if checks.is_empty() {
                diagnostics::CHECKS.iter().map(|s| s.to_string()).collect()
            } else {
                checks
            };
            let constants = Constants { c0: constants.c0, c1: constants.c1, c2: constants.c2, c3: constants.c3 };
            let reports = diagnostics::run_diagnostics(&suite, seed, &constants)?;
            let text = match output.format {
                Format::Json => reports.iter().map(|r| Ok(serde_json::to_string(r)? + "\n")).collect::<Result<String>>()?,
                Format::Csv => reports_csv(&reports),
            };
            emit(output.out.as_deref(), &text)?;
            Ok(if diagnostics::all_pass(&reports) { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Gen { config, seed, out, truth } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let config = ExperimentConfig::from_json(&text)?;
            let model = config.scenario.build()?;
            emit(out.as_deref(), &sample_graph(&model, seed).to_edge_list())?;
            if let Some(path) = truth {
                emit(Some(&path), &Partition::from_membership(model.membership()).to_text())?;
            }
            Ok(Verdict::Pass)
        }
    }
}

fn load_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(c3) = args.c3 {
        config.c3 = c3;
    }
    config.validate()?;
    Ok(config)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn reports_csv(reports: &[TailReport]) -> String {
    let mut out = String::from("check,n,samples,threshold,exceed_count,empirical_rate,bound_rate,pass\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.check, r.n, r.samples, r.threshold, r.exceed_count, r.empirical_rate, r.bound_rate, r.pass
        ));
    }
    out
}
