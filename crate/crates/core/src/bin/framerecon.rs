use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use framerecon::cli;

#[derive(Parser)]
#[command(
    name = "framerecon",
    about = "Run frame-reconstruction experiments from TOML configs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config (a path, or the name of a bundled config).
    Run { config: String },
    /// List the bundled experiment configs.
    List,
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => {
            let path = PathBuf::from(&config);
            let outcome = if path.exists() {
                cli::run_path(&path)
            } else if let Some(cfg) = cli::bundled(&config) {
                cli::run_config(&cfg)
            } else {
                cli::run_path(&path)
            };
            if let Some(err) = &outcome.error {
                eprintln!("error: {err}");
            }
            if let Some(report) = &outcome.report {
                for s in &report.sections {
                    let status = if s.passed { "pass" } else { "FAIL" };
                    println!("{status}  {:<40} {}", s.key, s.verdict);
                    for c in s
                        .checks
                        .iter()
                        .filter(|c| !c.passed && c.role == framerecon::CheckRole::Assert)
                    {
                        println!(
                            "      {} residual {:.3e} > {:.3e} {}",
                            c.name, c.residual, c.threshold, c.note
                        );
                    }
                }
                if let Some(dir) = &outcome.dir {
                    println!("report: {}", dir.join("report.toml").display());
                }
            }
            ExitCode::from(outcome.code as u8)
        }
        Command::List => match cli::list_experiments() {
            Ok(entries) => {
                for e in entries {
                    println!("{:<28} {:<38} {}", e.name, e.anchor, e.description);
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Version => {
            println!("framerecon {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}
