//! Config-driven experiment runner.
//!
//! An experiment is a TOML document naming a kind (`analyze`, `reconstruct`,
//! `perturb`, `kaczmarz`, `weighted-fourier` or `suite`), the objects to build
//! and the scales to scan. Running it writes `report.toml` plus one CSV per
//! scan table. Exit status is 0 when every gating check passes, 1 when one
//! fails, and 2 when the config or the experiment setup is invalid.

pub mod catalog;
pub mod config;
pub mod runner;

pub use catalog::{bundled, list_experiments, CatalogEntry, BUNDLED};
pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use runner::{
    execute, output_dir, run_config, run_path, ReportDocument, RunOutcome, Section, OUTPUT_DIR_ENV,
};
