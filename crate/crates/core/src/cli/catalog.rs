//! Bundled experiment configs, compiled into the binary.

use crate::cli::config::{ConfigError, ExperimentConfig};

/// `(file name, contents)` of every bundled config.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "scaled-linear-suite.toml",
        include_str!("../../configs/scaled-linear-suite.toml"),
    ),
    (
        "repeated-basis-suite.toml",
        include_str!("../../configs/repeated-basis-suite.toml"),
    ),
    (
        "frame-criteria.toml",
        include_str!("../../configs/frame-criteria.toml"),
    ),
    (
        "synthesized-operator.toml",
        include_str!("../../configs/synthesized-operator.toml"),
    ),
    (
        "diverging-candidate.toml",
        include_str!("../../configs/diverging-candidate.toml"),
    ),
    (
        "schauder-classification.toml",
        include_str!("../../configs/schauder-classification.toml"),
    ),
    (
        "normalized-duals.toml",
        include_str!("../../configs/normalized-duals.toml"),
    ),
    (
        "riesz-criterion.toml",
        include_str!("../../configs/riesz-criterion.toml"),
    ),
    (
        "unconditional-pair.toml",
        include_str!("../../configs/unconditional-pair.toml"),
    ),
    (
        "perturbation-stability.toml",
        include_str!("../../configs/perturbation-stability.toml"),
    ),
    (
        "perturbation-budget.toml",
        include_str!("../../configs/perturbation-budget.toml"),
    ),
    (
        "cantor-kaczmarz.toml",
        include_str!("../../configs/cantor-kaczmarz.toml"),
    ),
    (
        "cantor-smooth-kaczmarz.toml",
        include_str!("../../configs/cantor-smooth-kaczmarz.toml"),
    ),
    (
        "cantor-rajchman.toml",
        include_str!("../../configs/cantor-rajchman.toml"),
    ),
    (
        "weighted-singular.toml",
        include_str!("../../configs/weighted-singular.toml"),
    ),
    (
        "weighted-lebesgue.toml",
        include_str!("../../configs/weighted-lebesgue.toml"),
    ),
    (
        "weighted-step.toml",
        include_str!("../../configs/weighted-step.toml"),
    ),
];

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub file: &'static str,
    pub name: String,
    pub anchor: String,
    pub description: String,
}

/// Every bundled config, parsed and validated.
pub fn list_experiments() -> Result<Vec<CatalogEntry>, ConfigError> {
    BUNDLED
        .iter()
        .map(|(file, text)| {
            let cfg = ExperimentConfig::from_toml(text).map_err(|e| match e {
                ConfigError::Parse(m) => ConfigError::Parse(format!("{file}: {m}")),
                other => other,
            })?;
            Ok(CatalogEntry {
                file,
                name: cfg.name,
                anchor: cfg.anchor,
                description: cfg.description,
            })
        })
        .collect()
}

/// A bundled config by experiment name or file name.
pub fn bundled(name: &str) -> Option<ExperimentConfig> {
    BUNDLED.iter().find_map(|(file, text)| {
        let cfg = ExperimentConfig::from_toml(text).ok()?;
        (cfg.name == name || *file == name).then_some(cfg)
    })
}
