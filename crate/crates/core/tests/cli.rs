//! The `framerecon` binary and the runner behind it.

use std::path::Path;
use std::process::{Command, Output};

use framerecon::cli::{
    self, bundled, execute, list_experiments, ConfigError, ExperimentConfig, OUTPUT_DIR_ENV,
};
use framerecon::CheckRole;

fn framerecon(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framerecon"))
        .args(args)
        .env(OUTPUT_DIR_ENV, out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const PASSING: &str = r#"
name = "small-scaled-linear"
kind = "reconstruct"
dims = [4, 8, 16]
trials = 5
sequence = { kind = "scaled-linear" }
operator = { kind = "scaled-linear-inverse-square" }
batteries = ["properties"]
"#;

#[test]
fn passing_run_exits_zero_and_writes_report_and_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "pass.toml", PASSING);
    let out = framerecon(&["run", &cfg], tmp.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let dir = tmp.path().join("small-scaled-linear");
    let report: toml::Value =
        toml::from_str(&std::fs::read_to_string(dir.join("report.toml")).unwrap()).unwrap();
    assert_eq!(report["passed"].as_bool(), Some(true));
    assert_eq!(
        report["sections"][0]["verdict"].as_str(),
        Some("reconstructs")
    );
    let csv = std::fs::read_to_string(dir.join("fr-scan--fr-scan.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("dim,max_residual,b_norm,b_min_eig")
    );
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn unattainable_tolerance_fails_a_gating_check_with_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!("{PASSING}tolerances = {{ residual = 1e-300 }}\n");
    let cfg = write_config(tmp.path(), "strict.toml", &text);
    let out = framerecon(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
    assert!(tmp.path().join("small-scaled-linear/report.toml").exists());
}

#[test]
fn negative_dim_is_a_config_error_naming_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let text = PASSING.replace("dims = [4, 8, 16]", "dims = [4, -8, 16]");
    let cfg = write_config(tmp.path(), "negative.toml", &text);
    let out = framerecon(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dims[1]"));
    assert!(!tmp.path().join("small-scaled-linear").exists());
}

#[test]
fn unknown_sequence_kind_is_rejected() {
    let err = ExperimentConfig::from_toml(
        &PASSING.replace("kind = \"scaled-linear\"", "kind = \"wavelets\""),
    )
    .unwrap_err();
    assert!(matches!(err, ConfigError::Parse(_)));
    assert!(err.to_string().contains("wavelets"));
}

#[test]
fn zero_tolerance_is_a_config_error() {
    let text = format!("{PASSING}tolerances = {{ residual = 0.0 }}\n");
    let err = ExperimentConfig::from_toml(&text).unwrap_err();
    assert!(
        matches!(err, ConfigError::Field { ref field, .. } if field == "tolerances.residual"),
        "{err}"
    );
}

#[test]
fn missing_config_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = framerecon(&["run", "no-such-experiment.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_expectation_gates_the_run() {
    let text = format!("{PASSING}\n[expect.verdicts]\n\"fr-scan\" = \"fails\"\n");
    let cfg = ExperimentConfig::from_toml(&text).unwrap();
    let doc = execute(&cfg).unwrap();
    let section = doc.section("expectations").unwrap();
    assert!(!section.passed);
    assert!(!doc.passed);
}

#[test]
fn list_and_version() {
    let tmp = tempfile::tempdir().unwrap();
    let out = framerecon(&["list"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let listed = String::from_utf8_lossy(&out.stdout).lines().count();
    assert_eq!(listed, list_experiments().unwrap().len());

    let out = framerecon(&["version"], tmp.path());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        format!("framerecon {}", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn bundled_catalog_is_broad_and_valid() {
    let entries = list_experiments().unwrap();
    assert!(
        entries.len() >= 12,
        "only {} bundled experiments",
        entries.len()
    );
    let mut names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), entries.len(), "bundled names must be unique");
    for e in &entries {
        let cfg = bundled(&e.name).unwrap();
        cfg.validate()
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert!(!e.description.is_empty(), "{} has no description", e.name);
    }
}

#[test]
fn bundled_run_by_name_through_the_binary() {
    let tmp = tempfile::tempdir().unwrap();
    let out = framerecon(&["run", "perturbation-budget"], tmp.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(tmp.path().join("perturbation-budget/report.toml").exists());
}

#[test]
fn report_round_trips_and_pass_flags_recompute() {
    let cfg = bundled("scaled-linear-suite").unwrap();
    let doc = execute(&cfg).unwrap();
    let text = doc.to_toml();
    let back: cli::ReportDocument = toml::from_str(&text).unwrap();
    assert_eq!(back.config, doc.config);
    assert_eq!(back.sections.len(), doc.sections.len());
    for s in &back.sections {
        for c in &s.checks {
            assert_eq!(c.passed, c.recomputed_pass(), "{}/{}", s.key, c.name);
        }
        let gating = s
            .checks
            .iter()
            .filter(|c| c.role == CheckRole::Assert)
            .all(|c| c.passed);
        assert_eq!(s.passed, gating, "section {}", s.key);
    }
    assert_eq!(back.passed, back.sections.iter().all(|s| s.passed));
}

#[test]
fn config_round_trips_through_toml() {
    for e in list_experiments().unwrap() {
        let cfg = bundled(&e.name).unwrap();
        assert_eq!(
            ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(),
            cfg,
            "{}",
            e.name
        );
    }
}
