//! Executes validated experiments and writes their reports.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::analysis::{bounds_scan, gohberg_checks, unconditionality_test};
use crate::cli::config::{
    Battery, ConfigError, ExperimentConfig, ExperimentKind, TargetKind, TolerancePolicy,
};
use crate::linalg::random::{gaussian, random_unit_vector, seeded_rng, test_vectors};
use crate::linalg::C64;
use crate::measures::exponential::{exponential_fr_check, ExponentialCheckConfig};
use crate::measures::kaczmarz::{auxiliary_expansion, auxiliary_on, kaczmarz_on, AtomicSpace};
use crate::measures::{rajchman_scan, unit_phase, MeasureModel, WITNESS_CONSTANT_TOL};
use crate::perturbation::{non_frame_persistence, perturbed_reconstruction_operator};
use crate::reconstruction::{
    fr_at, fr_scan, frame_criteria, normalized_dual_check, reconstruction_properties,
    schauder_classifier, DIVERGENCE_EXPONENT,
};
use crate::report::{Check, PropertyReport, ScanTable};

/// Environment variable overriding the output base directory.
pub const OUTPUT_DIR_ENV: &str = "FRAMERECON_OUTPUT_DIR";
/// Output base directory when the environment does not set one.
pub const DEFAULT_OUTPUT_BASE: &str = "framerecon-out";
/// Relative rounding allowance on the per-step Kaczmarz error increase.
pub const MONOTONICITY_ALLOWANCE: f64 = 1e-12;
/// Deepest auxiliary expansion compared against the iterate by default.
pub const DEFAULT_DUAL_PATH_DEPTH: usize = 500;
/// Fraction of `‖f‖` the Kaczmarz residual must fall below to count as effective.
pub const EFFECTIVENESS_FRACTION: f64 = 0.1;

/// Reference to a CSV file written next to the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRef {
    pub name: String,
    pub file: String,
    pub columns: Vec<String>,
}

/// One battery's outcome inside a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub key: String,
    pub title: String,
    pub verdict: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<TableRef>,
    #[serde(skip)]
    pub data: Vec<ScanTable>,
}

impl Section {
    pub fn from_report(key: impl Into<String>, report: PropertyReport) -> Self {
        let key = key.into();
        let passed = report.passed();
        let tables = report
            .tables
            .iter()
            .map(|t| TableRef {
                name: t.name.clone(),
                file: csv_name(&key, &t.name),
                columns: t.columns.clone(),
            })
            .collect();
        Section {
            key,
            title: report.title,
            verdict: report.verdict,
            passed,
            checks: report.checks,
            tables,
            data: report.tables,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn prefixed(mut self, prefix: &str) -> Self {
        self.key = format!("{prefix}/{}", self.key);
        for t in &mut self.tables {
            t.file = csv_name(&self.key, &t.name);
        }
        self
    }
}

fn csv_name(key: &str, table: &str) -> String {
    format!("{}--{table}.csv", key.replace('/', "--"))
}

/// Everything a run produces. Only `generated_unix` and `wall_time_seconds` vary between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub artifact: String,
    pub version: String,
    pub experiment: String,
    pub kind: ExperimentKind,
    pub anchor: String,
    pub seed: u64,
    pub tolerance: TolerancePolicy,
    pub generated_unix: u64,
    pub wall_time_seconds: f64,
    pub passed: bool,
    pub sections: Vec<Section>,
    pub config: ExperimentConfig,
}

impl ReportDocument {
    pub fn section(&self, key: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.key == key)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serialises")
    }

    /// Writes `report.toml` and one CSV per table into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for s in &self.sections {
            for (r, t) in s.tables.iter().zip(&s.data) {
                t.write_csv(&dir.join(&r.file))?;
            }
        }
        std::fs::write(dir.join("report.toml"), self.to_toml())
    }
}

/// Runs a validated config in memory.
pub fn execute(cfg: &ExperimentConfig) -> Result<ReportDocument, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();
    let sections = sections_for(cfg)?;
    let passed = sections.iter().all(|s| s.passed);
    Ok(ReportDocument {
        artifact: "framerecon".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        experiment: cfg.name.clone(),
        kind: cfg.kind,
        anchor: cfg.anchor.clone(),
        seed: cfg.seed,
        tolerance: cfg.tolerance(),
        generated_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        passed,
        sections,
        config: cfg.clone(),
    })
}

/// `$FRAMERECON_OUTPUT_DIR/<output or name>`, defaulting the base to [`DEFAULT_OUTPUT_BASE`].
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    let base = std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_BASE));
    base.join(cfg.output.as_deref().unwrap_or(&cfg.name))
}

/// Exit status and, when the config was usable, the report and where it went.
#[derive(Debug)]
pub struct RunOutcome {
    pub code: i32,
    pub report: Option<ReportDocument>,
    pub dir: Option<PathBuf>,
    pub error: Option<String>,
}

/// Parse, execute and write. Exit code 0 when every gating check passes, 1 on a
/// failing check, 2 when the config or the experiment setup is invalid.
pub fn run_path(path: &Path) -> RunOutcome {
    match ExperimentConfig::from_path(path) {
        Ok(cfg) => run_config(&cfg),
        Err(e) => RunOutcome {
            code: 2,
            report: None,
            dir: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn run_config(cfg: &ExperimentConfig) -> RunOutcome {
    let doc = match execute(cfg) {
        Ok(doc) => doc,
        Err(e) => {
            return RunOutcome {
                code: 2,
                report: None,
                dir: None,
                error: Some(e.to_string()),
            }
        }
    };
    let dir = output_dir(cfg);
    if let Err(e) = doc.write(&dir) {
        return RunOutcome {
            code: 2,
            report: Some(doc),
            dir: Some(dir.clone()),
            error: Some(format!("cannot write report to {}: {e}", dir.display())),
        };
    }
    RunOutcome {
        code: if doc.passed { 0 } else { 1 },
        report: Some(doc),
        dir: Some(dir),
        error: None,
    }
}

fn sections_for(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    let mut sections = match cfg.kind {
        ExperimentKind::Analyze => analyze(cfg)?,
        ExperimentKind::Reconstruct => reconstruct(cfg)?,
        ExperimentKind::Perturb => perturb(cfg)?,
        ExperimentKind::Kaczmarz => kaczmarz(cfg)?,
        ExperimentKind::WeightedFourier => weighted(cfg)?,
        ExperimentKind::Suite => suite(cfg)?,
    };
    if !cfg.expect.is_empty() {
        sections.push(expectations(cfg, &sections));
    }
    Ok(sections)
}

fn anchor_or<'a>(cfg: &'a ExperimentConfig, fallback: &'a str) -> &'a str {
    if cfg.anchor.is_empty() {
        fallback
    } else {
        &cfg.anchor
    }
}

fn analyze(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    let seq = cfg.sequence()?.build()?;
    let dims = cfg.scales()?;
    let anchor = anchor_or(cfg, "frame-bounds");
    let scan = bounds_scan(&seq, &dims)?;
    let mut bounds = PropertyReport::new(format!("frame bounds: {}", seq.name()));
    let lower_positive = scan.lower_infimum > 0.0;
    bounds.push(
        Check::flag("bessel-like", anchor, scan.bessel_like())
            .with_note(format!(
                "upper-bound growth exponent {:.4}",
                scan.growth_exponent
            ))
            .observe(),
    );
    bounds.push(
        Check::flag("lower-bound-positive", anchor, lower_positive)
            .with_note(format!("smallest lower bound {:.6e}", scan.lower_infimum))
            .observe(),
    );
    bounds.verdict = match (scan.bessel_like(), lower_positive) {
        (true, true) => "frame-like",
        (true, false) => "bessel-like",
        (false, _) => "not-bessel",
    }
    .into();
    bounds.tables.push(scan.table("bounds"));
    let op = cfg.operator.as_ref().and_then(|o| o.fixed());
    let riesz = gohberg_checks(&seq, &dims, op.as_ref(), cfg.seed)?;
    Ok(vec![
        Section::from_report("bounds", bounds),
        Section::from_report("riesz", riesz),
    ])
}

fn reconstruct(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    let seq = cfg.sequence()?.build()?;
    let dims = cfg.scales()?;
    let tol = cfg.tolerance().residual;
    let anchor = anchor_or(cfg, "frame-reconstruction");
    let candidate = cfg.operator()?.candidate();
    let scan = fr_scan(
        &seq,
        |d| candidate.at(&seq, d),
        &dims,
        cfg.trials,
        cfg.seed,
        tol,
    )?;
    let mut fr = PropertyReport::new(format!("frame reconstruction: {}", seq.name()));
    for (d, v) in dims.iter().zip(&scan.per_dim) {
        fr.push(
            Check::new(format!("fr-residual-{d}"), anchor, v.max_residual, tol).with_seed(cfg.seed),
        );
    }
    fr.push(
        Check::new(
            "candidate-norm-exponent",
            anchor,
            scan.norm_exponent,
            DIVERGENCE_EXPONENT,
        )
        .with_note(format!("largest-scale norm {:.6e}", scan.aggregate.b_norm))
        .observe(),
    );
    fr.push(
        Check::flag(
            "candidate-stable",
            anchor,
            scan.aggregate.stable_across_dims,
        )
        .observe(),
    );
    fr.verdict = scan.aggregate.verdict.as_str().into();
    fr.tables.push(scan.table("fr-scan"));
    let mut sections = vec![Section::from_report("fr-scan", fr)];

    let last = *dims.last().unwrap();
    let mut batteries = cfg.batteries.clone();
    batteries.dedup();
    for battery in batteries {
        let fixed = || {
            cfg.operator
                .as_ref()
                .and_then(|o| o.fixed())
                .expect("validated")
        };
        let (key, report) = match battery {
            Battery::Properties => (
                "properties",
                reconstruction_properties(&seq, &fixed(), last, cfg.trials, cfg.seed, tol)?,
            ),
            Battery::FrameCriteria => ("frame-criteria", frame_criteria(&seq, &fixed(), &dims)?),
            Battery::Schauder => (
                "schauder",
                schauder_classifier(&seq, &dims, cfg.trials, cfg.seed, tol)?,
            ),
            Battery::NormalizedDuals => (
                "normalized-duals",
                normalized_dual_check(&seq, &fixed(), &dims, cfg.trials, cfg.seed, tol)?,
            ),
            Battery::Riesz => (
                "riesz",
                gohberg_checks(&seq, &dims, Some(&fixed()), cfg.seed)?,
            ),
            Battery::Unconditionality => (
                "unconditionality",
                unconditionality(cfg, &seq, &fixed(), last, tol)?,
            ),
        };
        sections.push(Section::from_report(key, report));
    }
    Ok(sections)
}

fn unconditionality(
    cfg: &ExperimentConfig,
    seq: &crate::sequences::VectorSequence,
    op: &crate::sequences::ReconstructionOperator,
    scale: usize,
    tol: f64,
) -> Result<PropertyReport, ConfigError> {
    let anchor = "unconditional-reconstruction";
    let dim = seq.space_dim(scale);
    let f = random_unit_vector(&mut seeded_rng(cfg.seed, dim as u64), dim);
    let u = unconditionality_test(seq, op, &f, scale, cfg.trials.max(1), cfg.seed)?;
    let mut r = PropertyReport::new(format!("reordered reconstruction series: {}", seq.name()));
    r.push(
        Check::new("reordered-sum-agrees", anchor, u.terminal_deviation, tol).with_seed(cfg.seed),
    );
    r.push(
        Check::new(
            "partial-sum-excursion",
            anchor,
            u.max_excursion / u.f_norm,
            1.0,
        )
        .with_note(format!("{} permutations at scale {scale}", u.trials))
        .observe(),
    );
    r.verdict = if u.max_excursion <= u.f_norm {
        "bounded-excursions"
    } else {
        "large-excursions"
    }
    .into();
    Ok(r)
}

fn perturb(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    let spec = cfg.sequence()?;
    let h = spec.build()?;
    let base = spec.base().expect("validated").build()?;
    let op = cfg.operator()?.fixed().expect("validated");
    let dims = cfg.scales()?;
    let tol = cfg.tolerance().residual;
    let anchor = anchor_or(cfg, "perturbation-stability");
    let mut report = PropertyReport::new(format!(
        "perturbed reconstruction: {} from {}",
        h.name(),
        base.name()
    ));
    let mut table = ScanTable::new(
        "perturbation",
        &[
            "dim",
            "spent",
            "budget",
            "condition",
            "asymmetry",
            "max_residual",
        ],
    );
    let mut all_ok = true;
    for &d in &dims {
        let p = perturbed_reconstruction_operator(&base, &op, &h, d)?;
        let tf = h.truncate(d)?;
        let v = fr_at(
            &tf,
            &p.operator,
            &test_vectors(cfg.seed, tf.dim(), cfg.trials.max(1)),
            tol,
        )?;
        all_ok &= v.max_residual <= tol;
        report.push(
            Check::new(format!("fr-residual-{d}"), anchor, v.max_residual, tol).with_seed(cfg.seed),
        );
        table.push(vec![
            d as f64,
            p.budget.spent,
            p.budget.budget,
            p.condition,
            p.asymmetry,
            v.max_residual,
        ]);
        if d == *dims.last().unwrap() {
            let b = p.budget;
            let lambda = b.budget;
            report.push(
                Check::new(
                    "budget-identity",
                    anchor,
                    (lambda * (2.0 * b.m + lambda) * b.b_norm - 1.0).abs(),
                    1e-12,
                )
                .with_note(format!("M {}, norm {}, budget {lambda}", b.m, b.b_norm)),
            );
            report.push(
                Check::new("budget-tightness", anchor, b.tightness(), 1.0)
                    .with_note(format!("spent {} of {lambda}", b.spent))
                    .observe(),
            );
        }
    }
    report.verdict = if all_ok { "reconstructs" } else { "fails" }.into();
    report.tables.push(table);
    let mut sections = vec![Section::from_report("perturbation", report)];
    if let Some(p) = &cfg.persistence {
        let pdims: Vec<usize> = p.dims.iter().map(|d| *d as usize).collect();
        sections.push(Section::from_report(
            "persistence",
            non_frame_persistence(&base, &h, p.alpha, &pdims)?,
        ));
    }
    Ok(sections)
}

fn kaczmarz(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    let mu = cfg.measure.as_ref().expect("validated");
    let tol = cfg.tolerance().residual;
    let mut sections = Vec::new();
    if let Some(sweep_spec) = &cfg.sweep {
        let anchor = anchor_or(cfg, "kaczmarz-effectiveness");
        let space = AtomicSpace::new(mu)?;
        let sweep = sweep_spec.indices();
        let depth = sweep.len().min(DEFAULT_DUAL_PATH_DEPTH);
        let checkpoints: Vec<usize> = match &cfg.checkpoints {
            Some(c) => c.clone(),
            None => {
                let mut c: Vec<usize> = [1, 10, 100, depth]
                    .into_iter()
                    .filter(|c| *c <= depth && *c > 0)
                    .collect();
                c.dedup();
                c
            }
        };
        let aux_len = checkpoints.iter().copied().max().unwrap_or(0);
        let gs = auxiliary_on(&space, &sweep[..aux_len]);
        let kind = cfg.targets.unwrap_or(TargetKind::Gaussian);
        let count = cfg.trials.max(1);
        let mut worst_increase: f64 = 0.0;
        let mut dual: f64 = 0.0;
        let mut worst_final: f64 = 0.0;
        let mut first_hits = Vec::new();
        let mut history = vec![0.0f64; sweep.len()];
        for t in 0..count {
            let f = target(&space, kind, cfg.seed, t);
            let h = kaczmarz_on(&space, &f, &sweep)?;
            worst_increase = worst_increase.max(h.worst_increase());
            for (acc, r) in history.iter_mut().zip(&h.residuals) {
                *acc = acc.max(r / h.f_norm);
            }
            worst_final =
                worst_final.max(h.residuals.last().copied().unwrap_or(1.0) * 1.0 / h.f_norm);
            first_hits.push(h.first_below(EFFECTIVENESS_FRACTION));
            let expansions = auxiliary_expansion(&space, &sweep[..aux_len], &gs, &f, &checkpoints);
            for (&n, x) in checkpoints.iter().zip(&expansions) {
                let prefix = kaczmarz_on(&space, &f, &sweep[..n])?;
                let d = x
                    .iter()
                    .zip(&prefix.iterate)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                dual = dual.max(d / h.f_norm);
            }
        }
        let mut report = PropertyReport::new(format!(
            "Kaczmarz iteration: {} targets over {} steps",
            count,
            sweep.len()
        ));
        report.push(
            Check::new(
                "monotonicity",
                anchor,
                worst_increase,
                MONOTONICITY_ALLOWANCE,
            )
            .with_seed(cfg.seed),
        );
        report.push(
            Check::new("dual-path", anchor, dual, tol)
                .with_seed(cfg.seed)
                .with_note(format!("checkpoints {checkpoints:?}")),
        );
        let reached = first_hits.iter().filter(|h| h.is_some()).count();
        report.push(
            Check::new("effectiveness", anchor, worst_final, EFFECTIVENESS_FRACTION)
                .with_seed(cfg.seed)
                .with_note(format!(
                    "{reached} of {count} targets fell below {EFFECTIVENESS_FRACTION}·‖f‖"
                ))
                .observe(),
        );
        report.verdict = if reached == count {
            "effective-within-sweep"
        } else {
            "slow-within-sweep"
        }
        .into();
        let mut table = ScanTable::new("residual-history", &["index", "value"]);
        for (i, v) in history.iter().enumerate() {
            table.push(vec![i as f64, *v]);
        }
        report.tables.push(table);
        sections.push(Section::from_report("kaczmarz", report));
    }
    if let Some(r) = &cfg.rajchman {
        sections.push(Section::from_report(
            "rajchman",
            rajchman(cfg, mu, r.n_max, r.quadrature_level, tol)?,
        ));
    }
    Ok(sections)
}

fn target(space: &AtomicSpace, kind: TargetKind, seed: u64, trial: usize) -> Vec<C64> {
    match kind {
        TargetKind::Gaussian => {
            let mut rng = seeded_rng(seed, trial as u64);
            (0..space.dim()).map(|_| gaussian(&mut rng)).collect()
        }
        TargetKind::Parabola => space
            .points
            .iter()
            .map(|x| C64::new(x * (1.0 - x), 0.0))
            .collect(),
    }
}

fn rajchman(
    cfg: &ExperimentConfig,
    mu: &MeasureModel,
    n_max: u64,
    level: Option<u32>,
    tol: f64,
) -> Result<PropertyReport, ConfigError> {
    let anchor = anchor_or(cfg, "rajchman-obstruction");
    let scan = rajchman_scan(mu, n_max)?;
    let mut report = PropertyReport::new("Fourier coefficient decay".to_string());
    report.push(
        Check::new(
            "witness-constant",
            anchor,
            scan.witness_spread,
            WITNESS_CONSTANT_TOL,
        )
        .with_note(format!("|μ̂(3^k)| = {:.12}", scan.witness[0]))
        .observe(),
    );
    if let (Some(level), MeasureModel::Cantor { .. }) = (level, mu) {
        let (points, weights) = crate::measures::cantor_atoms(level);
        let nu = MeasureModel::atomic(points, weights)?;
        let shift = 0.5 / 3f64.powi(level as i32);
        let (mut modulus, mut complex): (f64, f64) = (0.0, 0.0);
        for n in -(n_max as i64)..=(n_max as i64) {
            let exact = mu.fourier_coefficient(n);
            let atomic = nu.fourier_coefficient(n);
            modulus = modulus.max((exact.norm() - atomic.norm()).abs());
            // Left-endpoint atoms sit half an interval left of the interval centres.
            complex = complex.max((exact - atomic * unit_phase(-(n as f64) * shift)).norm());
        }
        report.push(
            Check::new("quadrature-modulus", anchor, modulus, tol)
                .with_note(format!("atomic level {level}")),
        );
        report.push(Check::new(
            "quadrature-phase-corrected",
            anchor,
            complex,
            tol,
        ));
    }
    report.verdict = scan.verdict.clone();
    report.tables.push(scan.table());
    Ok(report)
}

fn weighted(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    let w = cfg.weight.as_ref().expect("validated");
    let spec = cfg.weighted.clone().unwrap_or_default();
    let ecfg = ExponentialCheckConfig {
        grid: spec.grid,
        orders: spec.orders,
        trials: cfg.trials.max(1),
        seed: cfg.seed,
        a2_depth: spec.a2_depth,
    };
    Ok(vec![Section::from_report(
        "weighted-exponentials",
        exponential_fr_check(w, &ecfg)?,
    )])
}

fn suite(cfg: &ExperimentConfig) -> Result<Vec<Section>, ConfigError> {
    // Experiments run concurrently; sections keep declaration order.
    let results: Vec<Result<Vec<Section>, ConfigError>> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .experiments
            .iter()
            .map(|e| s.spawn(move || sections_for(e)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread panicked"))
            .collect()
    });
    let mut sections = Vec::new();
    for (e, r) in cfg.experiments.iter().zip(results) {
        sections.extend(r?.into_iter().map(|s| s.prefixed(&e.name)));
    }
    Ok(sections)
}

fn expectations(cfg: &ExperimentConfig, sections: &[Section]) -> Section {
    let anchor = "expectations";
    let mut report = PropertyReport::new(format!("declared expectations for {}", cfg.name));
    for (key, expected) in &cfg.expect.verdicts {
        let check = match sections.iter().find(|s| &s.key == key) {
            Some(s) => Check::flag(format!("verdict:{key}"), anchor, &s.verdict == expected)
                .with_note(format!("expected {expected}, got {}", s.verdict)),
            None => {
                Check::flag(format!("verdict:{key}"), anchor, false).with_note("no such section")
            }
        };
        report.push(check);
    }
    for (path, expected) in &cfg.expect.flags {
        let found = path.rsplit_once('.').and_then(|(key, name)| {
            sections
                .iter()
                .find(|s| s.key == key)
                .and_then(|s| s.check(name))
        });
        let check = match found {
            Some(c) => Check::flag(format!("flag:{path}"), anchor, c.passed == *expected)
                .with_note(format!("expected {expected}, got {}", c.passed)),
            None => Check::flag(format!("flag:{path}"), anchor, false).with_note("no such check"),
        };
        report.push(check);
    }
    report.verdict = if report.passed() {
        "as-expected"
    } else {
        "unexpected"
    }
    .into();
    Section::from_report("expectations", report)
}
