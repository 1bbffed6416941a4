use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qhopf_cli::config::parse_checks;
use qhopf_cli::output::{render, summary};
use qhopf_cli::{parse_config, run_pipeline, Check, Format};

#[derive(Parser)]
#[command(name = "qhopf", version, about = "Exact verification of quasi-Hopf algebras from pointed Hopf data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks for the datum in a config file.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Comma list of checks; overrides `checks` in the config.
        #[arg(long, value_name = "NAME,...")]
        check: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Record wall-clock time per check (reports are then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let Command::Verify { config, report, check, format, timings } = Cli::parse().command;
    let text = match fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let checks = match check.as_deref().map(parse_checks) {
        Some(Ok(c)) => c,
        Some(Err(e)) => {
            eprintln!("error: --check: {e}");
            return ExitCode::from(2);
        }
        None if cfg.checks.is_empty() => Check::defaults(cfg.comod.is_some()),
        None => cfg.checks.clone(),
    };
    let rep = run_pipeline(&cfg, &checks, timings);
    let body = render(&rep, format);
    match report.or_else(|| cfg.report.clone()) {
        Some(path) => {
            if let Err(e) = fs::write(&path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!("{}", summary(&rep));
        }
        None => print!("{body}"),
    }
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
