//! Run configuration shared by the command line and JSON config files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{nondimensionalize, ModelParams, PhysicalParams};
use crate::oracle::MAX_STATES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Bo,
    Compare,
    Expand,
    Correlate,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Built-in parameter sets. All force constants are one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// All masses one.
    Symmetric,
    /// Two nuclei of mass `nucleus_mass` and one electron: `(M, M, 1)`.
    OneElectronDiatomic,
    /// One nucleus and two electrons, particle 1 being the nucleus: `(M, 1, 1)`.
    HeliumLike,
}

impl Preset {
    pub fn params(self, nucleus_mass: f64) -> Result<ModelParams> {
        if !(nucleus_mass > 0.0) || !nucleus_mass.is_finite() {
            return Err(Error::validation(
                "nucleus_mass",
                format!("must be positive, got {nucleus_mass}"),
            ));
        }
        let m = nucleus_mass;
        let masses = match self {
            Preset::Symmetric => [1.0, 1.0, 1.0],
            Preset::OneElectronDiatomic => [m, m, 1.0],
            Preset::HeliumLike => [m, 1.0, 1.0],
        };
        ModelParams::from_values(masses[0], masses[1], masses[2], 1.0, 1.0, 1.0)
    }
}

/// Which particle separation `correlate` tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Pair {
    /// `x1 - x2`.
    Nn,
    /// `x1 - x3`.
    #[default]
    Ne,
}

/// Parameter object: dimensionless, or physical (wrapped in `"physical"`)
/// to be nondimensionalized first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamsInput {
    Model(ModelParams),
    Physical(PhysicalParams),
}

impl ParamsInput {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::validation("params", e.to_string()))?;
        Self::from_value(value)
    }

    fn from_value(value: serde_json::Value) -> Result<Self> {
        let physical = value.as_object().and_then(|o| o.get("physical")).cloned();
        match physical {
            Some(inner) => {
                if value.as_object().map(|o| o.len()) != Some(1) {
                    return Err(Error::validation("params", "\"physical\" must be the only key"));
                }
                let p: PhysicalParams =
                    serde_json::from_value(inner).map_err(|e| Error::validation("physical", e.to_string()))?;
                p.validate()?;
                Ok(ParamsInput::Physical(p))
            }
            None => {
                let p: ModelParams =
                    serde_json::from_value(value).map_err(|e| Error::validation("params", e.to_string()))?;
                Ok(ParamsInput::Model(p))
            }
        }
    }

    pub fn model(&self) -> Result<ModelParams> {
        match self {
            ParamsInput::Model(p) => Ok(*p),
            ParamsInput::Physical(p) => nondimensionalize(p).map(|(m, _, _)| m),
        }
    }
}

impl Serialize for ParamsInput {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ParamsInput::Model(p) => p.serialize(s),
            ParamsInput::Physical(p) => {
                #[derive(Serialize)]
                struct Wrapped<'a> {
                    physical: &'a PhysicalParams,
                }
                Wrapped { physical: p }.serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for ParamsInput {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        Self::from_value(value).map_err(serde::de::Error::custom)
    }
}

/// `steps` evenly spaced samples from `start` to `end`, written `start:end:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRange {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl SampleRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite() && self.start < self.end) {
            return Err(Error::validation("range", "need finite start < end"));
        }
        if self.steps < 2 {
            return Err(Error::validation("range", "need at least 2 steps"));
        }
        Ok(())
    }
}

impl FromStr for SampleRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::validation("range", format!("expected start:end:steps, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let r = SampleRange {
            start: parts[0].trim().parse().map_err(|_| bad())?,
            end: parts[1].trim().parse().map_err(|_| bad())?,
            steps: parts[2].trim().parse().map_err(|_| bad())?,
        };
        r.validate()?;
        Ok(r)
    }
}

impl fmt::Display for SampleRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.steps)
    }
}

impl Serialize for SampleRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SampleRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub const DEFAULT_NMAX: u32 = 3;
pub const DEFAULT_NUCLEUS_MASS: f64 = 100.0;
pub const DEFAULT_LAMBDAS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
pub const DEFAULT_RANGE: SampleRange = SampleRange {
    start: -3.0,
    end: 3.0,
    steps: 61,
};
pub const DEFAULT_GRID_N: usize = 256;
pub const DEFAULT_STATES: usize = 6;
/// Level tables hold `(nmax + 1)^2` rows.
pub const MAX_NMAX: u32 = 1000;
pub const MAX_GRID_N: usize = 2048;

fn default_nmax() -> u32 {
    DEFAULT_NMAX
}
fn default_nucleus_mass() -> f64 {
    DEFAULT_NUCLEUS_MASS
}
fn default_lambdas() -> Vec<f64> {
    DEFAULT_LAMBDAS.to_vec()
}
fn default_range() -> SampleRange {
    DEFAULT_RANGE
}
fn default_grid_n() -> usize {
    DEFAULT_GRID_N
}
fn default_states() -> usize {
    DEFAULT_STATES
}

/// Everything one invocation needs. Exactly one of `params`, `params_file`
/// and `preset` must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default = "default_nucleus_mass")]
    pub nucleus_mass: f64,
    /// Defaults to CSV, except JSON for `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default = "default_nmax")]
    pub nmax: u32,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    /// Scaled nuclear masses for `expand`; default to `m3`, making lambda
    /// the electron/nucleus mass ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2: Option<f64>,
    #[serde(default = "default_range")]
    pub range: SampleRange,
    #[serde(default)]
    pub pair: Pair,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    /// Square half width for `verify`; automatic when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<f64>,
    #[serde(default = "default_states")]
    pub states: usize,
}

impl RunConfig {
    /// A configuration with every option at its default and no parameter source.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: None,
            params_file: None,
            preset: None,
            nucleus_mass: DEFAULT_NUCLEUS_MASS,
            format: None,
            nmax: DEFAULT_NMAX,
            kappa: 0.0,
            lambdas: default_lambdas(),
            u1: None,
            u2: None,
            range: DEFAULT_RANGE,
            pair: Pair::default(),
            grid_n: DEFAULT_GRID_N,
            domain: None,
            states: DEFAULT_STATES,
        }
    }

    pub fn output_format(&self) -> OutputFormat {
        self.format.unwrap_or(match self.command {
            Command::Verify => OutputFormat::Json,
            _ => OutputFormat::Csv,
        })
    }

    /// Check option ranges and that exactly one parameter source is present.
    pub fn validate(&self) -> Result<()> {
        let sources = [self.params.is_some(), self.params_file.is_some(), self.preset.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if sources != 1 {
            return Err(Error::validation(
                "params",
                format!("exactly one of params, params_file or preset is required, got {sources}"),
            ));
        }
        if self.nmax > MAX_NMAX {
            return Err(Error::validation("nmax", format!("at most {MAX_NMAX}, got {}", self.nmax)));
        }
        if !self.kappa.is_finite() {
            return Err(Error::validation("kappa", "must be finite"));
        }
        if self.lambdas.is_empty() {
            return Err(Error::validation("lambdas", "need at least one value"));
        }
        for (i, &l) in self.lambdas.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::validation(format!("lambdas[{i}]"), format!("must be positive, got {l}")));
            }
        }
        for (name, u) in [("u1", self.u1), ("u2", self.u2)] {
            if let Some(u) = u {
                if !(u > 0.0) || !u.is_finite() {
                    return Err(Error::validation(name, format!("must be positive, got {u}")));
                }
            }
        }
        self.range.validate()?;
        if self.grid_n > MAX_GRID_N {
            return Err(Error::validation("grid_n", format!("at most {MAX_GRID_N}, got {}", self.grid_n)));
        }
        if let Some(l) = self.domain {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::validation("domain", format!("must be positive, got {l}")));
            }
        }
        if self.states == 0 || self.states > MAX_STATES {
            return Err(Error::validation(
                "states",
                format!("must be between 1 and {MAX_STATES}, got {}", self.states),
            ));
        }
        Ok(())
    }

    /// Dimensionless parameters from whichever source is set.
    pub fn model_params(&self) -> Result<ModelParams> {
        self.validate()?;
        if let Some(p) = &self.params {
            return p.model();
        }
        if let Some(path) = &self.params_file {
            let text = std::fs::read_to_string(path)?;
            return ParamsInput::parse(&text)?.model();
        }
        let preset = self.preset.expect("validated: one source present");
        preset.params(self.nucleus_mass)
    }
}

/// Read and validate a JSON run configuration. A relative `params_file` is
/// resolved against the configuration file's directory.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut config: RunConfig =
        serde_json::from_str(&text).map_err(|e| Error::validation("config", e.to_string()))?;
    if let Some(file) = &config.params_file {
        if file.is_relative() {
            if let Some(dir) = path.parent() {
                config.params_file = Some(dir.join(file));
            }
        }
    }
    config.validate()?;
    Ok(config)
}
