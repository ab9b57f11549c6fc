//! Versioned TOML experiment configuration.
//!
//! ```toml
//! schema = "qedsim-config/1"
//! seed = 7
//! shots = 100000
//! postselection = "optimal-threshold"
//!
//! [grids]
//! phi = { start = 0.0, stop = 6.283185307179586, points = 13 }
//! p_err = [0.0, 0.05, 0.1]
//!
//! [errors]
//! mode = "incoherent"
//!
//! [noise]
//! residual_excitation = 0.0
//! decoherence = { t1_ns = 20000.0, t2_ns = [15000.0, 15000.0, 15000.0, 15000.0, 15000.0] }
//! readout = { eps_t = 0.046, eps_b = 0.046 }
//! ```

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qedsim::noise::{DecoherenceConfig, ErrorMode, NoiseConfig, ReadoutModel};
use qedsim::repcode::REGISTER_QUBITS;

use crate::CliError;

pub const SCHEMA: &str = "qedsim-config/1";
pub const DEFAULT_PHI_POINTS: usize = 13;
pub const DEFAULT_P_POINTS: usize = 21;

/// The four experiments, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ParityCheck,
    Entangle,
    QedSweep,
    ErrorTable,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::ParityCheck => "parity-check",
            Experiment::Entangle => "entangle",
            Experiment::QedSweep => "qed-sweep",
            Experiment::ErrorTable => "error-table",
        }
    }
}

/// How ancilla records are postselected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Postselection {
    /// Every record is kept; veto probabilities are ignored.
    #[default]
    OptimalThreshold,
    /// Records are discarded with the configured veto probabilities.
    Strong,
}

/// Explicit list or evenly spaced range, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        points: usize,
    },
}

impl Grid {
    pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
        match points {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n)
                .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range {
                start,
                stop,
                points,
            } => Self::linspace(*start, *stop, *points),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_err: Option<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Incoherent,
    Coherent,
}

impl From<ModeName> for ErrorMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Incoherent => ErrorMode::Incoherent,
            ModeName::Coherent => ErrorMode::Coherent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorsBlock {
    #[serde(default)]
    pub mode: ModeName,
    /// Second-round flip probability for the logical fidelity; follows the
    /// first-round `p_err` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_second: Option<f64>,
}

/// One value for every register qubit, or one per qubit in register order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerQubit {
    Uniform(f64),
    List(Vec<f64>),
}

impl PerQubit {
    fn resolve(&self, field: &str) -> Result<Vec<f64>, CliError> {
        match self {
            PerQubit::Uniform(v) => Ok(vec![*v; REGISTER_QUBITS]),
            PerQubit::List(v) if v.len() == REGISTER_QUBITS => Ok(v.clone()),
            PerQubit::List(v) => Err(CliError::Config(format!(
                "noise.decoherence.{field}: expected {REGISTER_QUBITS} values, got {}",
                v.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceBlock {
    pub t1_ns: PerQubit,
    pub t2_ns: PerQubit,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutBlock {
    #[serde(default)]
    pub eps_t: f64,
    #[serde(default)]
    pub eps_b: f64,
    #[serde(default)]
    pub veto_t: f64,
    #[serde(default)]
    pub veto_b: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseBlock {
    #[serde(default)]
    pub residual_excitation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoherence: Option<DecoherenceBlock>,
    #[serde(default)]
    pub readout: ReadoutBlock,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: String,
    /// When set, the only subcommand this file may drive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub postselection: Postselection,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub errors: ErrorsBlock,
    #[serde(default)]
    pub noise: NoiseBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA.into(),
            experiment: None,
            seed: None,
            shots: 0,
            postselection: Postselection::default(),
            grids: Grids::default(),
            errors: ErrorsBlock::default(),
            noise: NoiseBlock::default(),
            output: OutputBlock::default(),
        }
    }
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub ideal: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies overrides, fills default grids and validates everything.
    pub fn resolve(mut self, experiment: Experiment, o: &Overrides) -> Result<Self, CliError> {
        if self.schema != SCHEMA {
            return Err(CliError::Config(format!(
                "schema: expected \"{SCHEMA}\", got \"{}\"",
                self.schema
            )));
        }
        if let Some(e) = self.experiment {
            if e != experiment {
                return Err(CliError::Config(format!(
                    "experiment: file is for `{}`, not `{}`",
                    e.name(),
                    experiment.name()
                )));
            }
        }
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if let Some(s) = o.shots {
            self.shots = s;
        }
        if o.ideal {
            self.noise = NoiseBlock::default();
        }
        let phi = self.grids.phi.as_ref().map_or_else(
            || Grid::linspace(0.0, TAU, DEFAULT_PHI_POINTS),
            Grid::values,
        );
        let p_err = self
            .grids
            .p_err
            .as_ref()
            .map_or_else(|| Grid::linspace(0.0, 1.0, DEFAULT_P_POINTS), Grid::values);
        self.grids = Grids {
            phi: Some(Grid::List(phi)),
            p_err: Some(Grid::List(p_err)),
        };
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CliError> {
        let cfg = |m: String| Err(CliError::Config(m));
        if self.phi().is_empty() {
            return cfg("grids.phi: empty grid".into());
        }
        if self.phi().iter().any(|x| !x.is_finite()) {
            return cfg("grids.phi: values must be finite".into());
        }
        if self.p_err().is_empty() {
            return cfg("grids.p_err: empty grid".into());
        }
        if let Some(p) = self.p_err().into_iter().find(|p| !(0.0..=1.0).contains(p)) {
            return cfg(format!("grids.p_err: {p} outside [0, 1]"));
        }
        if let Some(p) = self.errors.p_second {
            if !(0.0..=1.0).contains(&p) {
                return cfg(format!("errors.p_second: {p} outside [0, 1]"));
            }
        }
        if self.shots > 0 && self.seed.is_none() {
            return cfg("seed: required when shots > 0".into());
        }
        self.noise_config().map(|_| ())
    }

    pub fn phi(&self) -> Vec<f64> {
        self.grids
            .phi
            .as_ref()
            .map(Grid::values)
            .unwrap_or_default()
    }

    pub fn p_err(&self) -> Vec<f64> {
        self.grids
            .p_err
            .as_ref()
            .map(Grid::values)
            .unwrap_or_default()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Simulator noise model; vetoes only apply under strong postselection.
    pub fn noise_config(&self) -> Result<NoiseConfig<f64>, CliError> {
        let n = &self.noise;
        let r = &n.readout;
        ReadoutModel::ancillas(r.eps_t, r.eps_b, r.veto_t, r.veto_b)
            .map_err(|e| CliError::Config(format!("noise.readout: {e}")))?;
        let (veto_t, veto_b) = match self.postselection {
            Postselection::OptimalThreshold => (0.0, 0.0),
            Postselection::Strong => (r.veto_t, r.veto_b),
        };
        let readout = ReadoutModel::ancillas(r.eps_t, r.eps_b, veto_t, veto_b)
            .map_err(|e| CliError::Config(format!("noise.readout: {e}")))?;
        let decoherence = match &n.decoherence {
            None => DecoherenceConfig::disabled(),
            Some(d) => DecoherenceConfig {
                enabled: true,
                t1_ns: d.t1_ns.resolve("t1_ns")?,
                t2_ns: d.t2_ns.resolve("t2_ns")?,
            },
        };
        let noise = NoiseConfig {
            decoherence,
            readout,
            residual_excitation: n.residual_excitation,
        };
        noise
            .validate()
            .map_err(|e| CliError::Config(format!("noise: {e}")))?;
        Ok(noise)
    }
}
