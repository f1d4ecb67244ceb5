mod commands;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use labstrings::monoid::AxiomConfig;

use commands::PathKind;

#[derive(Parser)]
#[command(name = "labstrings", version, about = "Exact checks for partial monoids, configurations and strings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the partial monoid axioms up to a given arity.
    Axioms {
        monoid: PathBuf,
        #[arg(long, default_value_t = 4)]
        arity: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Presentation and Grothendieck group of a finite partial monoid.
    Completion {
        monoid: PathBuf,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// Sample and certify a path of configurations.
    Homotopy {
        config: PathBuf,
        #[arg(long, value_enum)]
        path: PathKind,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Lipschitz bound as "p/q"; defaults to the bound of the path.
        #[arg(long)]
        lipschitz: Option<String>,
    },
    /// Orbit, stabilizer and fixed-point verdicts of a configuration.
    Orbit {
        config: PathBuf,
        group: PathBuf,
        /// Comma-separated element names; repeat for several subgroups.
        #[arg(long)]
        subgroup: Vec<String>,
    },
    /// Low-degree homology of a nerve.
    Nerve {
        monoid: PathBuf,
        #[arg(long, default_value_t = 3)]
        p_bound: usize,
        #[arg(long, default_value_t = 2_000_000)]
        budget: usize,
        /// Use the bar constructions instead of the category of tuples.
        #[arg(long)]
        bar: bool,
    },
    /// Smith normal form with certificates.
    Snf { matrix: PathBuf },
    /// Certify the path from a configuration plus its inverse to the empty one.
    CertifyInverse {
        config: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

fn run(command: Command) -> anyhow::Result<manifest::Outcome> {
    match command {
        Command::Axioms {
            monoid,
            arity,
            budget,
            samples,
            seed,
        } => commands::axioms(
            &monoid,
            AxiomConfig {
                max_arity: arity,
                budget,
                samples,
                seed,
            },
        ),
        Command::Completion { monoid, arity } => commands::completion(&monoid, arity),
        Command::Homotopy {
            config,
            path,
            samples,
            lipschitz,
        } => commands::homotopy(&config, path, samples, lipschitz.as_deref()),
        Command::Orbit { config, group, subgroup } => commands::orbit(&config, &group, &subgroup),
        Command::Nerve {
            monoid,
            p_bound,
            budget,
            bar,
        } => commands::nerve(&monoid, p_bound, bar, budget),
        Command::Snf { matrix } => commands::snf(&matrix),
        Command::CertifyInverse { config, samples } => commands::homotopy(&config, PathKind::Inverse, samples, None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&outcome.report()).expect("reports serialize");
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    eprintln!("{}: {}", outcome.manifest.command, if outcome.pass { "pass" } else { "FAIL" });
    ExitCode::from(if outcome.pass { 0 } else { 1 })
}
