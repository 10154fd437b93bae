//! Experiment configuration: a TOML file fully determines a run.
//!
//! ```toml
//! name = "cubic-resonant-k4"
//! equation = "cubic"
//! sigma = 1.0
//! k = 4
//! n_steps = 32
//!
//! [initial]
//! kind = "fourier"
//! modes = [{ mode = 0, re = 1.0 }, { mode = -2, re = 0.5 }]
//!
//! [step]
//! p = 1
//! q = 2
//! power = 1
//! ```
//!
//! Linear runs replace `sigma` with a `[potential]` table (same `kind`
//! grammar as `[initial]`).  Steps are either exact rationals `τ =
//! 2πp/q^power` (resonance candidates) or plain floats `tau = 0.37`.
//! `tolerances` is an optional table of named overrides consumed by the
//! verification checks; unknown names are carried along untouched so a
//! config can pin tolerances for external tooling too.
//!
//! Everything that can be rejected is rejected at load time with the field
//! name in the message — a config that validates will simulate.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use splitstep::model::ModelSpec;
use splitstep::resonance::ResonantStep;
use splitstep::sample::{sample_function, FunctionSpec};
use splitstep::grid::{make_grid, Grid, PhysicalState};

use crate::HarnessError;

/// Which equation the potential flow solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Linear,
    Cubic,
}

/// Time step: exact rational `2πp/q^power` or a plain float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepSpec {
    Rational { p: u64, q: u64, power: u8 },
    Float { tau: f64 },
}

impl StepSpec {
    /// The step size in seconds-of-simulation; rationals go through the
    /// validated constructor so `2π·2/4` means the reduced `2π·1/2`.
    pub fn tau(&self) -> Result<f64, HarnessError> {
        match *self {
            StepSpec::Rational { p, q, power } => Ok(ResonantStep::new(p, q, power)
                .map_err(|e| HarnessError::Config(format!("step: {e}")))?
                .tau()),
            StepSpec::Float { tau } => {
                if tau.is_finite() && tau > 0.0 {
                    Ok(tau)
                } else {
                    Err(HarnessError::Config(format!(
                        "step.tau: must be finite and positive, got {tau}"
                    )))
                }
            }
        }
    }

    pub fn as_resonant(&self) -> Option<Result<ResonantStep, HarnessError>> {
        match *self {
            StepSpec::Rational { p, q, power } => Some(
                ResonantStep::new(p, q, power)
                    .map_err(|e| HarnessError::Config(format!("step: {e}"))),
            ),
            StepSpec::Float { .. } => None,
        }
    }
}

/// Optional explicit artifact names; relative to the output directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<String>,
    pub json: Option<String>,
}

/// One experiment, as read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Identifier used for artifact file names and report headers.
    pub name: String,
    pub equation: Equation,
    /// Required (±1) for cubic runs, forbidden for linear ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Required for linear runs, forbidden for cubic ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<FunctionSpec>,
    pub initial: FunctionSpec,
    /// Grid size (even, ≥ 4).
    pub k: usize,
    pub step: StepSpec,
    pub n_steps: u64,
    /// Seed for the randomized parts of the verification suite.
    #[serde(default)]
    pub seed: u64,
    /// Named tolerance overrides; see [`Tolerances`] for the defaults.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputPaths>,
}

/// Named tolerances with their defaults, after overrides.
#[derive(Debug, Clone)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Tolerances {
    pub fn get(&self, name: &str, default: f64) -> f64 {
        self.0.get(name).copied().unwrap_or(default)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Reject inconsistent configs with the offending field named.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));

        if self.name.is_empty() {
            return fail("name: must be non-empty".into());
        }
        if !self.k.is_multiple_of(2) || self.k < 4 {
            return fail(format!("k: grid size must be even and ≥ 4, got {}", self.k));
        }
        match self.equation {
            Equation::Linear => {
                if self.potential.is_none() {
                    return fail("potential: linear runs need one".into());
                }
                if self.sigma.is_some() {
                    return fail("sigma: only meaningful for cubic runs".into());
                }
            }
            Equation::Cubic => {
                if self.potential.is_some() {
                    return fail("potential: cubic runs take none (the state is its own potential)".into());
                }
                match self.sigma {
                    Some(s) if s == 1.0 || s == -1.0 => {}
                    Some(s) => return fail(format!("sigma: must be ±1, got {s}")),
                    None => return fail("sigma: cubic runs need one".into()),
                }
            }
        }
        // Steps, sampling, and divisibility all go through the library
        // constructors so the error text matches what a crash would say.
        self.step.tau()?;
        let grid = self.grid()?;
        self.model_spec()?
            .on_grid(&grid)
            .map_err(|e| HarnessError::Config(format!("potential: {e}")))?;
        sample_function(&grid, &self.initial, false)
            .map_err(|e| HarnessError::Config(format!("initial: {e}")))?;
        if let Some(Err(e)) = self.step.as_resonant() {
            return Err(e);
        }
        for (name, value) in &self.tolerances {
            if !(value.is_finite() && *value > 0.0) {
                return fail(format!("tolerances.{name}: must be finite and positive"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, HarnessError> {
        make_grid(self.k).map_err(|e| HarnessError::Config(format!("k: {e}")))
    }

    pub fn model_spec(&self) -> Result<ModelSpec, HarnessError> {
        match self.equation {
            Equation::Linear => Ok(ModelSpec::Linear {
                potential: self
                    .potential
                    .clone()
                    .ok_or_else(|| HarnessError::Config("potential: missing".into()))?,
            }),
            Equation::Cubic => Ok(ModelSpec::Cubic {
                sigma: self
                    .sigma
                    .ok_or_else(|| HarnessError::Config("sigma: missing".into()))?,
            }),
        }
    }

    pub fn initial_state(&self, grid: &Grid) -> Result<PhysicalState, HarnessError> {
        Ok(sample_function(grid, &self.initial, false)?)
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances(self.tolerances.clone())
    }

    /// Artifact file names (explicit overrides or `<name>.csv` / `.json`).
    pub fn artifact_names(&self) -> (String, String) {
        let defaults = (format!("{}.csv", self.name), format!("{}.json", self.name));
        match &self.outputs {
            None => defaults,
            Some(paths) => (
                paths.csv.clone().unwrap_or(defaults.0),
                paths.json.clone().unwrap_or(defaults.1),
            ),
        }
    }
}

/// Control step for contrast runs: `τ = 2π·34/55`.  The fraction is a
/// continued-fraction convergent of `1/φ` (golden ratio), the number
/// hardest to approximate by rationals — consecutive powers `e^{-iτj²}`
/// then stay well away from resonance for every small denominator.
pub const CONTROL_STEP_FRACTION: (u64, u64) = (34, 55);

/// The control step as a float, for `step = { tau = … }` style configs.
pub fn control_step_tau() -> f64 {
    2.0 * std::f64::consts::PI * CONTROL_STEP_FRACTION.0 as f64 / CONTROL_STEP_FRACTION.1 as f64
}
