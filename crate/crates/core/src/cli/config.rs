//! Experiment declarations: parsing, validation and construction of the objects they name.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{ComplexVector, C64};
use crate::measures::{MeasureModel, WeightModel};
use crate::reconstruction::CandidateOperator;
use crate::sequences::{DeltaRule, ReconstructionOperator, SparseVector, VectorSequence};

/// Residual tolerance for exact diagonal and block experiments.
pub const DEFAULT_EXACT_TOL: f64 = 1e-9;
/// Residual tolerance for quadrature-backed experiments.
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-6;

/// A config that failed to parse or validate. Maps to exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("experiment could not be set up: {0}")]
    Contract(#[from] Error),
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Analyze,
    Reconstruct,
    Perturb,
    Kaczmarz,
    WeightedFourier,
    Suite,
}

impl ExperimentKind {
    pub fn is_quadrature(self) -> bool {
        matches!(
            self,
            ExperimentKind::Kaczmarz | ExperimentKind::WeightedFourier
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SequenceSpec {
    /// `e_n`.
    Orthonormal,
    /// `(n+1) e_n`.
    ScaledLinear,
    /// `e_n / (n+1)`.
    ScaledReciprocal,
    /// `(n+1)^power e_n`.
    PowerBasis { power: f64 },
    /// `e_k` repeated `k+1` times.
    RepeatedBasis,
    /// `e_k` repeated `base + slope·k` times.
    BlockRepeated { base: usize, slope: usize },
    /// Explicit real vectors in `ℝ^dim`.
    Finite { dim: usize, vectors: Vec<Vec<f64>> },
    Perturbed {
        base: Box<SequenceSpec>,
        perturbation: PerturbationSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PerturbationSpec {
    /// `δ_n = total / 2^{n+1} · e_coordinate`.
    Geometric { total: f64, coordinate: usize },
    /// One delta `value · e_coordinate` at entry `index`.
    Single {
        index: usize,
        coordinate: usize,
        value: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Identity,
    /// `e_k ↦ e_k / (k+1)²`.
    ScaledLinearInverseSquare,
    /// `e_k ↦ e_k / (k+1)`.
    RepeatedBasisInverse,
    /// `e_k ↦ scale · (k+1)^power e_k`.
    PowerDiagonal {
        power: f64,
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    /// Symmetrised pseudo-inverse of the truncated frame operator, per scale.
    Synthesized,
    /// Dual of the normalised family divided by the squared norms, per scale.
    NormalizedBasisDual,
}

fn unit_scale() -> f64 {
    1.0
}

impl SequenceSpec {
    pub fn build(&self) -> Result<VectorSequence, ConfigError> {
        Ok(match self {
            SequenceSpec::Orthonormal => VectorSequence::orthonormal(),
            SequenceSpec::ScaledLinear => VectorSequence::scaled_linear(),
            SequenceSpec::ScaledReciprocal => VectorSequence::scaled_reciprocal(),
            SequenceSpec::PowerBasis { power } => {
                if !power.is_finite() {
                    return Err(field("sequence.power", "must be finite"));
                }
                VectorSequence::power_basis(*power)
            }
            SequenceSpec::RepeatedBasis => VectorSequence::repeated_basis(),
            SequenceSpec::BlockRepeated { base, slope } => {
                if *base == 0 {
                    return Err(field(
                        "sequence.base",
                        "block multiplicity must be positive",
                    ));
                }
                let (b, s) = (*base, *slope);
                VectorSequence::block_repeated(format!("block-repeated({b}+{s}k)"), move |k| {
                    b + s * k
                })?
            }
            SequenceSpec::Finite { dim, vectors } => {
                if *dim == 0 || vectors.is_empty() {
                    return Err(field(
                        "sequence.vectors",
                        "need a positive dim and at least one vector",
                    ));
                }
                if let Some(i) = vectors.iter().position(|v| v.len() != *dim) {
                    return Err(field(
                        format!("sequence.vectors[{i}]"),
                        format!("expected {dim} entries"),
                    ));
                }
                let vs = vectors
                    .iter()
                    .map(|v| ComplexVector::from_real(v))
                    .collect();
                VectorSequence::finite("finite", *dim, vs)?
            }
            SequenceSpec::Perturbed { base, perturbation } => {
                let base = base.build()?;
                base.perturb(perturbation.build()?)?
            }
        })
    }

    /// The unperturbed base, if any.
    pub fn base(&self) -> Option<&SequenceSpec> {
        match self {
            SequenceSpec::Perturbed { base, .. } => Some(base),
            _ => None,
        }
    }
}

impl PerturbationSpec {
    pub fn build(&self) -> Result<DeltaRule, ConfigError> {
        match *self {
            PerturbationSpec::Geometric { total, coordinate } => {
                if !(total >= 0.0) || !total.is_finite() {
                    return Err(field(
                        "perturbation.total",
                        "must be a finite nonnegative number",
                    ));
                }
                Ok(DeltaRule::geometric(total, coordinate))
            }
            PerturbationSpec::Single {
                index,
                coordinate,
                value,
            } => {
                if !value.is_finite() {
                    return Err(field("perturbation.value", "must be finite"));
                }
                Ok(DeltaRule::single(
                    index,
                    SparseVector::single(coordinate, C64::new(value, 0.0)),
                ))
            }
        }
    }
}

impl OperatorSpec {
    pub fn candidate(&self) -> CandidateOperator {
        match *self {
            OperatorSpec::Identity => CandidateOperator::Given(ReconstructionOperator::identity()),
            OperatorSpec::ScaledLinearInverseSquare => {
                CandidateOperator::Given(ReconstructionOperator::scaled_linear_inverse_square())
            }
            OperatorSpec::RepeatedBasisInverse => {
                CandidateOperator::Given(ReconstructionOperator::repeated_basis_inverse())
            }
            OperatorSpec::PowerDiagonal { power, scale } => {
                CandidateOperator::Given(ReconstructionOperator::diagonal(
                    format!("power-diagonal({scale}, {power})"),
                    move |k| scale * (k as f64 + 1.0).powf(power),
                ))
            }
            OperatorSpec::Synthesized => CandidateOperator::Synthesized,
            OperatorSpec::NormalizedBasisDual => CandidateOperator::NormalizedBasisDual,
        }
    }

    /// The operator when it does not depend on the scale.
    pub fn fixed(&self) -> Option<ReconstructionOperator> {
        match self.candidate() {
            CandidateOperator::Given(op) => Some(op),
            _ => None,
        }
    }
}

/// Optional extra batteries of a `reconstruct` experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Battery {
    Properties,
    FrameCriteria,
    Schauder,
    NormalizedDuals,
    Unconditionality,
    Riesz,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersistenceSpec {
    /// Witness decay `(k+1)^{−alpha}`.
    pub alpha: f64,
    pub dims: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub start: i64,
    pub length: usize,
    /// Interleave `0, 1, −1, 2, −2, …` instead of `start, start+1, …`.
    #[serde(default)]
    pub symmetric: bool,
}

impl SweepSpec {
    pub fn indices(&self) -> Vec<i64> {
        if self.symmetric {
            (0..self.length)
                .map(|p| crate::sequences::IndexSet::Integer.index_at(p))
                .collect()
        } else {
            (0..self.length as i64).map(|k| self.start + k).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    /// Independent complex Gaussian values at the atoms.
    Gaussian,
    /// `x(1 − x)` at the atoms.
    Parabola,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RajchmanSpec {
    pub n_max: u64,
    /// Atomic level used to cross-check the exact coefficients.
    #[serde(default)]
    pub quadrature_level: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedSpec {
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
    #[serde(default = "default_a2_depth")]
    pub a2_depth: u32,
}

fn default_grid() -> usize {
    4096
}
fn default_orders() -> Vec<usize> {
    vec![4, 8, 16, 32, 64]
}
fn default_a2_depth() -> u32 {
    12
}

impl Default for WeightedSpec {
    fn default() -> Self {
        WeightedSpec {
            grid: default_grid(),
            orders: default_orders(),
            a2_depth: default_a2_depth(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Residual threshold for reconstruction and identity checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

/// Expected outcomes. Each entry becomes a gating check in the report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Section key to expected verdict.
    #[serde(default)]
    pub verdicts: BTreeMap<String, String>,
    /// `section.check` to expected pass flag.
    #[serde(default)]
    pub flags: BTreeMap<String, bool>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty() && self.flags.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub anchor: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub batteries: Vec<Battery>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub persistence: Option<PersistenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<TargetKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rajchman: Option<RajchmanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighted: Option<WeightedSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Expectations::is_empty")]
    pub expect: Expectations,
    /// Output directory, relative to the output base.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub experiments: Vec<ExperimentConfig>,
}

fn default_trials() -> usize {
    10
}

/// Which tolerance applies and where it came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub residual: f64,
    /// `config`, `default-exact` or `default-quadrature`.
    pub source: String,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn tolerance(&self) -> TolerancePolicy {
        match self.tolerances.residual {
            Some(residual) => TolerancePolicy {
                residual,
                source: "config".into(),
            },
            None if self.kind.is_quadrature() => TolerancePolicy {
                residual: DEFAULT_QUADRATURE_TOL,
                source: "default-quadrature".into(),
            },
            None => TolerancePolicy {
                residual: DEFAULT_EXACT_TOL,
                source: "default-exact".into(),
            },
        }
    }

    /// Validated scan scales.
    pub fn scales(&self) -> Result<Vec<usize>, ConfigError> {
        scales_of("dims", &self.dims)
    }

    pub fn sequence(&self) -> Result<&SequenceSpec, ConfigError> {
        self.sequence
            .as_ref()
            .ok_or_else(|| field("sequence", format!("required for kind {:?}", self.kind)))
    }

    pub fn operator(&self) -> Result<&OperatorSpec, ConfigError> {
        self.operator
            .as_ref()
            .ok_or_else(|| field("operator", format!("required for kind {:?}", self.kind)))
    }

    /// Structural validation; numerical setup errors surface when the experiment runs.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.name.trim().is_empty() {
            return Err(field("name", "must not be empty"));
        }
        if let Some(r) = self.tolerances.residual {
            if !(r > 0.0) || !r.is_finite() {
                return Err(field(
                    "tolerances.residual",
                    format!("must be a finite positive number, got {r}"),
                ));
            }
        }
        if self.kind != ExperimentKind::Suite && !self.experiments.is_empty() {
            return Err(field(
                "experiments",
                "only a suite may declare sub-experiments",
            ));
        }
        match self.kind {
            ExperimentKind::Analyze | ExperimentKind::Reconstruct | ExperimentKind::Perturb => {
                self.scales()?;
                self.sequence()?.build()?;
                if self.kind != ExperimentKind::Analyze {
                    self.operator()?;
                }
                if self.trials == 0 && self.kind == ExperimentKind::Reconstruct {
                    return Err(field("trials", "must be positive"));
                }
                if !self.batteries.is_empty() && self.kind != ExperimentKind::Reconstruct {
                    return Err(field(
                        "batteries",
                        "only reconstruct experiments run extra batteries",
                    ));
                }
                let fixed_needed = self.batteries.iter().any(|b| *b != Battery::Schauder);
                if fixed_needed && self.operator.as_ref().and_then(|o| o.fixed()).is_none() {
                    return Err(field(
                        "batteries",
                        "these batteries need a scale-independent operator",
                    ));
                }
                if self.kind == ExperimentKind::Perturb {
                    if self.sequence()?.base().is_none() {
                        return Err(field(
                            "sequence",
                            "perturb experiments need a `perturbed` sequence",
                        ));
                    }
                    if self.operator()?.fixed().is_none() {
                        return Err(field(
                            "operator",
                            "perturb experiments need the base's fixed operator",
                        ));
                    }
                }
                if let Some(p) = &self.persistence {
                    scales_of("persistence.dims", &p.dims)?;
                    if !(p.alpha > 0.5) || !p.alpha.is_finite() {
                        return Err(field(
                            "persistence.alpha",
                            "must exceed 1/2 so the witness is square summable",
                        ));
                    }
                }
            }
            ExperimentKind::Kaczmarz => {
                let mu = self
                    .measure
                    .as_ref()
                    .ok_or_else(|| field("measure", "required for kind kaczmarz"))?;
                if let MeasureModel::Cantor { level } = mu {
                    if *level > 14 {
                        return Err(field("measure.level", format!("at most 14, got {level}")));
                    }
                }
                if self.sweep.is_none() && self.rajchman.is_none() {
                    return Err(field(
                        "sweep",
                        "a kaczmarz experiment needs a sweep, a rajchman scan, or both",
                    ));
                }
                if let Some(cps) = &self.checkpoints {
                    let len = self.sweep.as_ref().map(|s| s.length).unwrap_or(0);
                    if let Some(c) = cps.iter().find(|c| **c == 0 || **c > len) {
                        return Err(field(
                            "checkpoints",
                            format!("checkpoint {c} outside 1..={len}"),
                        ));
                    }
                }
                if let Some(r) = &self.rajchman {
                    if r.n_max < 10 {
                        return Err(field("rajchman.n_max", "must be at least 10"));
                    }
                }
            }
            ExperimentKind::WeightedFourier => {
                let w = self
                    .weight
                    .as_ref()
                    .ok_or_else(|| field("weight", "required for kind weighted-fourier"))?;
                w.validate().map_err(|e| field("weight", e.to_string()))?;
                let spec = self.weighted.clone().unwrap_or_default();
                if spec.grid == 0 || !spec.grid.is_multiple_of(2) {
                    return Err(field(
                        "weighted.grid",
                        format!("must be even and positive, got {}", spec.grid),
                    ));
                }
                if spec.orders.len() < 2 || spec.orders.windows(2).any(|o| o[0] >= o[1]) {
                    return Err(field(
                        "weighted.orders",
                        "need at least two strictly ascending orders",
                    ));
                }
            }
            ExperimentKind::Suite => {
                if self.experiments.is_empty() {
                    return Err(field(
                        "experiments",
                        "a suite needs at least one experiment",
                    ));
                }
                for (i, e) in self.experiments.iter().enumerate() {
                    if e.kind == ExperimentKind::Suite {
                        return Err(field(
                            format!("experiments[{i}].kind"),
                            "suites do not nest",
                        ));
                    }
                    e.validate().map_err(|err| match err {
                        ConfigError::Field { field: f, message } => ConfigError::Field {
                            field: format!("experiments[{i}].{f}"),
                            message,
                        },
                        other => other,
                    })?;
                }
            }
        }
        Ok(())
    }
}

fn scales_of(name: &str, dims: &[i64]) -> Result<Vec<usize>, ConfigError> {
    if dims.is_empty() {
        return Err(field(name, "at least one scale is required"));
    }
    for (i, d) in dims.iter().enumerate() {
        if *d <= 0 {
            return Err(field(
                format!("{name}[{i}]"),
                format!("must be a positive integer, got {d}"),
            ));
        }
    }
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(field(name, "scales must be strictly ascending"));
    }
    Ok(dims.iter().map(|d| *d as usize).collect())
}
