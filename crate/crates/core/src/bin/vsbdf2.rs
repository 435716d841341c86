use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vsbdf2::harness::{
    error_evolution_csv, run_convergence_study, run_error_evolution, run_stability_sweep,
    stability_csv, stability_summary, OutputFormat, StudyConfig,
};

#[derive(Parser)]
#[command(
    name = "vsbdf2",
    about = "Convergence and stability studies for variable step-size BDF2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error tables over a list of N.
    Convergence(StudyArgs),
    /// |U^n| series on geometric meshes.
    Stability(StudyArgs),
    /// Per-step L2 and H1 errors.
    Evolution(StudyArgs),
}

#[derive(Args)]
struct StudyArgs {
    /// key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// heat1d | semilinear2d
    #[arg(long)]
    problem: Option<String>,
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long = "T")]
    t: Option<String>,
    /// csbdf2 | vsbdf2
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    grading: Option<String>,
    /// geometric step ratio (vsbdf2)
    #[arg(long)]
    ratio: Option<String>,
    /// be | tf
    #[arg(long)]
    start: Option<String>,
    /// comma-separated step counts
    #[arg(long = "N")]
    n: Option<String>,
    /// csv | md
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long = "fp-tol")]
    fp_tol: Option<String>,
    #[arg(long = "fp-maxit")]
    fp_maxit: Option<String>,
    #[arg(long)]
    c1: Option<String>,
    /// comma-separated ratio grid for the stability sweep
    #[arg(long)]
    ratios: Option<String>,
}

impl StudyArgs {
    fn resolve(&self) -> vsbdf2::Result<StudyConfig> {
        let mut cfg = match &self.config {
            Some(path) => StudyConfig::load(path)?,
            None => StudyConfig::default(),
        };
        let flags = [
            ("problem", &self.problem),
            ("M", &self.m),
            ("b", &self.b),
            ("epsilon", &self.epsilon),
            ("T", &self.t),
            ("scheme", &self.scheme),
            ("grading", &self.grading),
            ("ratio", &self.ratio),
            ("start", &self.start),
            ("N", &self.n),
            ("format", &self.format),
            ("out", &self.out),
            ("fp-tol", &self.fp_tol),
            ("fp-maxit", &self.fp_maxit),
            ("c1", &self.c1),
            ("ratios", &self.ratios),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(command: Command) -> vsbdf2::Result<bool> {
    let (cfg, text, failed) = match command {
        Command::Convergence(args) => {
            let cfg = args.resolve()?;
            let study = run_convergence_study(&cfg)?;
            for row in &study.rows {
                if let Err(msg) = &row.outcome {
                    eprintln!("N = {}: {msg}", row.n_steps);
                }
            }
            let text = match cfg.format {
                OutputFormat::Csv => study.csv(),
                OutputFormat::Markdown => study.markdown(),
            };
            (cfg, text, study.any_failed())
        }
        Command::Stability(args) => {
            let cfg = args.resolve()?;
            let series = run_stability_sweep(&cfg)?;
            for s in &series {
                if let Some(msg) = &s.failure {
                    eprintln!("{}: {msg}", s.id);
                }
            }
            let text = match cfg.format {
                OutputFormat::Csv => stability_csv(&series),
                OutputFormat::Markdown => stability_summary(&series),
            };
            let failed = series.iter().any(|s| s.failure.is_some());
            (cfg, text, failed)
        }
        Command::Evolution(args) => {
            let cfg = args.resolve()?;
            let series = run_error_evolution(&cfg)?;
            (cfg, error_evolution_csv(&series), false)
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
