//! Run configuration.
//!
//! Configurations are TOML files with one table per concern:
//!
//! ```toml
//! [model]
//! name = "isothermal"
//! c = 0.6
//! lambda = 2.0
//!
//! [relaxation]
//! tau = 0.0
//!
//! [scheme]
//! name = "kahanli6"
//! beta = 5.0
//!
//! [mesh]
//! a = -2.0
//! b = 2.0
//! n_cells = 40
//! degree = 5
//!
//! [run]
//! t_max = 0.4
//! init = "smooth_pulse"
//! ```
//!
//! Any key can be overridden with a `table.key=value` string, see
//! [`RunConfig::apply_override`].

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::{Euler, FluxModel, Isothermal};
use crate::lattice::LatticeModel;
use crate::palindrome::{BaseMethod, SchemeKind};
use crate::relaxation::{RelaxationParams, DEFAULT_SINGULAR_TOL};

/// Environment variable that overrides `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "PALINDG_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub relaxation: RelaxationConfig,
    pub scheme: SchemeConfig,
    pub mesh: MeshConfig,
    pub run: RunSection,
    #[serde(default)]
    pub study: StudyConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// `"isothermal"` or `"euler"`.
    pub name: String,
    /// Sound speed of the isothermal model.
    #[serde(default)]
    pub c: Option<f64>,
    /// Polytropic exponent of the Euler model.
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

fn default_lambda() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationConfig {
    #[serde(default)]
    pub tau: f64,
    #[serde(default = "default_singular_tol")]
    pub singular_tol: f64,
}

fn default_singular_tol() -> f64 {
    DEFAULT_SINGULAR_TOL
}

impl Default for RelaxationConfig {
    fn default() -> Self {
        Self {
            tau: 0.0,
            singular_tol: DEFAULT_SINGULAR_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseConfig {
    Lie,
    Strang,
    Symmetric,
}

impl From<BaseConfig> for BaseMethod {
    fn from(b: BaseConfig) -> Self {
        match b {
            BaseConfig::Lie => BaseMethod::Lie,
            BaseConfig::Strang => BaseMethod::Strang,
            BaseConfig::Symmetric => BaseMethod::Symmetric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    /// One of `m2`, `tj4_real`, `tj4_complex`, `tj6_real`, `tj6_complex`,
    /// `suzuki4`, `kahanli6`.
    pub name: String,
    /// CFL number: `dt = β δ / λ` with `δ` the smallest node gap.
    pub beta: f64,
    /// Defaults to complex for complex schemes and real otherwise.
    #[serde(default)]
    pub scalar: Option<ScalarMode>,
    #[serde(default = "default_base")]
    pub base: BaseConfig,
}

fn default_base() -> BaseConfig {
    BaseConfig::Symmetric
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub a: f64,
    pub b: f64,
    pub n_cells: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    /// `ρ = 1 + exp(-30 x²)` at rest (isothermal).
    SmoothPulse,
    /// Constant states `left` / `right` of conservative variables split at `x0`.
    Riemann,
    /// Slowly moving erf contact wave (Euler).
    ContactWave,
    /// Piecewise linear conservative data read from `table`.
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_max: f64,
    pub init: InitKind,
    #[serde(default)]
    pub left: Vec<f64>,
    #[serde(default)]
    pub right: Vec<f64>,
    #[serde(default)]
    pub x0: f64,
    /// CSV file with columns `x, w0, .., w{m-1}` for `init = "table"`.
    #[serde(default)]
    pub table: Option<PathBuf>,
    /// A run halts once its norm exceeds this multiple of the initial norm.
    #[serde(default = "default_halt_growth")]
    pub halt_growth: f64,
}

fn default_halt_growth() -> f64 {
    1e6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Closed-form solution of the initial data (contact wave, isothermal
    /// Riemann problem).
    Exact,
    /// Numerical run on a mesh `reference_refinement` times finer than the
    /// finest study mesh.
    SelfRefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyAxis {
    /// Refine the mesh at fixed `β`, so `dt` shrinks with `h`.
    Mesh,
    /// Keep the mesh, shrink `dt` through the listed CFL numbers.
    Dt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default = "default_axis")]
    pub axis: StudyAxis,
    #[serde(default)]
    pub n_cells: Vec<usize>,
    #[serde(default)]
    pub betas: Vec<f64>,
    #[serde(default = "default_reference")]
    pub reference: ReferenceKind,
    #[serde(default = "default_refinement")]
    pub reference_refinement: usize,
    /// Scheme for the self-refined reference; defaults to the studied one.
    #[serde(default)]
    pub reference_scheme: Option<String>,
    /// Cache file for the self-refined reference.
    #[serde(default)]
    pub reference_cache: Option<PathBuf>,
}

fn default_axis() -> StudyAxis {
    StudyAxis::Mesh
}

fn default_reference() -> ReferenceKind {
    ReferenceKind::SelfRefined
}

fn default_refinement() -> usize {
    4
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            axis: default_axis(),
            n_cells: Vec::new(),
            betas: Vec::new(),
            reference: default_reference(),
            reference_refinement: default_refinement(),
            reference_scheme: None,
            reference_cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// File name stem of everything the run writes.
    #[serde(default = "default_stem")]
    pub stem: String,
    #[serde(default = "default_true")]
    pub profile: bool,
    #[serde(default)]
    pub history: bool,
}

fn default_stem() -> String {
    "run".into()
}

fn default_true() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            stem: default_stem(),
            profile: true,
            history: false,
        }
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies `table.key=value`, where `value` is TOML (`0.5`, `"m2"`,
    /// `[20, 40]`). Bare words are taken as strings.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (path, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        let (table, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::Config(format!("override key `{path}` is not table.key")))?;
        let raw = raw.trim();
        let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
            Ok(mut t) => t.remove("v").expect("parsed key"),
            Err(_) => toml::Value::String(raw.to_string()),
        };
        let mut doc = toml::Table::try_from(&*self).map_err(|e| Error::Config(e.to_string()))?;
        let section = doc
            .entry(table.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{table}` is not a table")))?;
        section.insert(key.to_string(), value);
        *self = doc.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn scheme_kind(&self) -> Result<SchemeKind> {
        self.scheme.name.parse()
    }

    pub fn scalar_mode(&self) -> Result<ScalarMode> {
        let kind = self.scheme_kind()?;
        Ok(self.scheme.scalar.unwrap_or(if kind.is_complex() {
            ScalarMode::Complex
        } else {
            ScalarMode::Real
        }))
    }

    pub fn lattice(&self) -> Result<LatticeModel<FluxModel>> {
        let flux = match self.model.name.as_str() {
            "isothermal" => {
                let c = self
                    .model
                    .c
                    .ok_or_else(|| Error::Config("isothermal model needs `model.c`".into()))?;
                FluxModel::Isothermal(Isothermal::new(c)?)
            }
            "euler" => FluxModel::Euler(Euler::new(self.model.gamma.unwrap_or(1.4))?),
            other => return Err(Error::Config(format!("unknown model `{other}`"))),
        };
        LatticeModel::new(flux, self.model.lambda)
    }

    pub fn relaxation_params(&self) -> Result<RelaxationParams> {
        RelaxationParams::new(self.relaxation.tau, self.relaxation.singular_tol)
    }

    /// Output directory: the environment override, then `output.dir`, then
    /// the working directory.
    pub fn output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| self.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("."))
    }

    /// Checks everything that does not need the mesh or the field.
    pub fn validate(&self) -> Result<()> {
        let kind = self.scheme_kind()?;
        if kind.is_complex() && self.scalar_mode()? == ScalarMode::Real {
            return Err(Error::Config(format!("scheme `{}` needs scalar = \"complex\"", kind.name())));
        }
        if !(self.scheme.beta > 0.0 && self.scheme.beta.is_finite()) {
            return Err(Error::Config(format!("beta must be positive, got {}", self.scheme.beta)));
        }
        if !(self.run.t_max >= 0.0 && self.run.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be non-negative, got {}", self.run.t_max)));
        }
        if !(self.mesh.b > self.mesh.a) || self.mesh.n_cells == 0 {
            return Err(Error::Config("mesh needs a < b and at least one cell".into()));
        }
        if !(self.run.halt_growth > 1.0) {
            return Err(Error::Config("halt_growth must exceed 1".into()));
        }
        let model = self.lattice()?;
        self.relaxation_params()?;
        let m = model.m();
        match self.run.init {
            InitKind::SmoothPulse if m != 2 => {
                return Err(Error::Config("smooth_pulse needs the isothermal model".into()))
            }
            InitKind::ContactWave if m != 3 => {
                return Err(Error::Config("contact_wave needs the euler model".into()))
            }
            InitKind::Riemann if self.run.left.len() != m || self.run.right.len() != m => {
                return Err(Error::Config(format!("riemann states need {m} conservative components")));
            }
            InitKind::Table if self.run.table.is_none() => {
                return Err(Error::Config("init = \"table\" needs `run.table`".into()))
            }
            _ => {}
        }
        if let Some(name) = &self.study.reference_scheme {
            let r: SchemeKind = name.parse()?;
            if r.is_complex() && self.scalar_mode()? == ScalarMode::Real {
                return Err(Error::Config(format!("reference scheme `{name}` is complex in a real study")));
            }
        }
        if self.study.reference_refinement == 0 {
            return Err(Error::Config("reference_refinement must be positive".into()));
        }
        if self.study.reference == ReferenceKind::Exact && !self.has_exact_solution() {
            return Err(Error::Config("no exact solution for this model and initial data".into()));
        }
        Ok(())
    }

    /// Whether [`ReferenceKind::Exact`] is available.
    pub fn has_exact_solution(&self) -> bool {
        match self.run.init {
            InitKind::ContactWave => true,
            InitKind::Riemann => self.model.name == "isothermal",
            _ => false,
        }
    }
}
