//! `pso-savl` command-line experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pso_savl::harness::presets::sensitivity_with_grid;
use pso_savl::harness::{
    preset_ablation, preset_main_comparison, preset_scalability, run_experiment, ExecOptions,
    ExperimentReport, ExperimentSpec, SensitivityParam,
};
use pso_savl::Error;

#[derive(Parser)]
#[command(
    name = "pso-savl",
    version,
    about = "Run PSO-SAVL experiments and write CSV reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML spec file
    Run {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Velocity-limit strategy ablation (fixed, iteration-linear, state-based)
    Ablation {
        #[command(flatten)]
        common: Common,
    },
    /// PSO-SAVL against PSO-LDIW on f1..f7 at D = 50
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep mu_max or mu_min of the state-based strategy
    Sensitivity {
        #[arg(long, value_enum)]
        param: Param,
        /// Comma-separated grid replacing the default one
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// PSO-SAVL against PSO-LDIW on f2, f6, f7 at D = 50, 100, 200
    Scalability {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    MuMax,
    MuMin,
}

#[derive(Args)]
struct Common {
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per (algorithm, problem) cell; applied after --budget-scale
    #[arg(long)]
    trials: Option<usize>,
    /// Multiply iterations and trial counts by this factor
    #[arg(long)]
    budget_scale: Option<f64>,
    /// Override the iteration budget of every algorithm
    #[arg(long)]
    max_iters: Option<usize>,
    /// Keep only these problems (ids such as f1,f7)
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<String>>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (1 = sequential)
    #[arg(long)]
    threads: Option<usize>,
    /// Print the resolved spec as TOML and exit
    #[arg(long)]
    print_spec: bool,
}

impl Common {
    fn apply(&self, spec: &mut ExperimentSpec) -> Result<(), Error> {
        if let Some(seed) = self.seed {
            spec.master_seed = seed;
        }
        if let Some(iters) = self.max_iters {
            spec.algorithms
                .iter_mut()
                .for_each(|a| a.config.max_iters = iters);
        }
        if let Some(scale) = self.budget_scale {
            spec.scale_budget(scale)?;
        }
        if let Some(n) = self.trials {
            spec.n_trials = n;
        }
        if let Some(keep) = &self.problems {
            let keep: Vec<pso_savl::BenchmarkFunction> =
                keep.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            spec.problems.retain(|p| {
                p.function
                    .parse()
                    .map(|f| keep.contains(&f))
                    .unwrap_or(true)
            });
        }
        if let Some(out) = &self.out {
            spec.output_dir = out.clone();
        }
        Ok(())
    }
}

fn print_summary(report: &ExperimentReport) {
    println!(
        "{:<20} {:<8} {:>14} {:>14} {:>8} {:>12}",
        "algorithm", "problem", "mean", "std", "success", "exp. FEs"
    );
    for row in report.summary_rows() {
        println!(
            "{:<20} {:<8} {:>14.6e} {:>14.6e} {:>7.1}% {:>12}",
            row.algorithm,
            row.problem,
            row.mean,
            row.std,
            100.0 * row.success_ratio,
            row.expected_fes
                .map(|v| format!("{v:.0}"))
                .unwrap_or_else(|| "-".into())
        );
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (mut spec, common) = match cli.command {
        Command::Run { spec, common } => (ExperimentSpec::load(&spec)?, common),
        Command::Ablation { common } => (preset_ablation(), common),
        Command::Compare { common } => (preset_main_comparison(), common),
        Command::Sensitivity {
            param,
            grid,
            common,
        } => {
            let which = match param {
                Param::MuMax => SensitivityParam::MuMax,
                Param::MuMin => SensitivityParam::MuMin,
            };
            let grid = grid.unwrap_or_else(|| which.default_grid());
            (sensitivity_with_grid(which, &grid), common)
        }
        Command::Scalability { common } => (preset_scalability(), common),
    };
    common.apply(&mut spec)?;
    spec.validate()?;
    if common.print_spec {
        print!("{}", spec.to_toml());
        return Ok(());
    }
    let report = run_experiment(
        &spec,
        ExecOptions {
            threads: common.threads,
        },
    )?;
    print_summary(&report);
    println!("wrote {}", spec.output_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
