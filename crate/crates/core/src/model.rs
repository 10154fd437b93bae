//! The two right-hand sides `f(x, |u|²)` the integrator supports.
//!
//! `Linear` multiplies by a fixed real potential `V(x)`; `Cubic` multiplies
//! by `σ|u|²` with `σ = ±1`.  A [`ModelSpec`] is grid-independent (the
//! potential is a Fourier series); [`ModelSpec::on_grid`] samples it once
//! into a [`GridModel`] that the flows evaluate pointwise.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::grid::{Grid, PhysicalState};
use crate::sample::{sample_function, FunctionSpec};

/// Grid-independent model description, as experiments configure it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum ModelSpec {
    /// `i ∂ₜu = -Δu + V(x) u`
    Linear { potential: FunctionSpec },
    /// `i ∂ₜu = -Δu + σ|u|² u`
    Cubic { sigma: f64 },
}

impl ModelSpec {
    /// Reject couplings other than `σ = ±1`.
    pub fn validate(&self) -> Result<(), CoreError> {
        if let ModelSpec::Cubic { sigma } = self {
            if *sigma != 1.0 && *sigma != -1.0 {
                return Err(CoreError::InvalidSigma { got: *sigma });
            }
        }
        Ok(())
    }

    /// Sample the model onto a grid.  Linear potentials must fit below the
    /// Nyquist mode and sample to real values.
    pub fn on_grid(&self, grid: &Grid) -> Result<GridModel, CoreError> {
        self.validate()?;
        match self {
            ModelSpec::Linear { potential } => {
                let sampled = sample_function(grid, potential, false)?;
                let scale = sampled
                    .values()
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0f64, f64::max)
                    .max(1.0);
                let max_imag = sampled
                    .values()
                    .iter()
                    .map(|v| v.im.abs())
                    .fold(0.0f64, f64::max);
                if max_imag > 1e-12 * scale {
                    return Err(CoreError::PotentialNotReal { max_imag });
                }
                Ok(GridModel::Linear {
                    v: sampled.values().iter().map(|v| v.re).collect(),
                })
            }
            ModelSpec::Cubic { sigma } => Ok(GridModel::Cubic { sigma: *sigma }),
        }
    }
}

/// Model with the potential already sampled on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub enum GridModel {
    Linear { v: Vec<f64> },
    Cubic { sigma: f64 },
}

impl GridModel {
    /// The real multiplier `W_k` seen by the potential flow at state `U`:
    /// `V_k` for the linear model, `σ|U_k|²` for the cubic one.
    pub fn phase_profile(&self, u: &PhysicalState) -> Vec<f64> {
        match self {
            GridModel::Linear { v } => v.clone(),
            GridModel::Cubic { sigma } => {
                u.values().iter().map(|z| sigma * z.norm_sqr()).collect()
            }
        }
    }

    /// Sup norm of the potential data: `‖V‖_∞` (linear) or `‖U‖_∞` (cubic,
    /// evaluated on the supplied state).
    pub fn amplitude_bound(&self, u: &PhysicalState) -> f64 {
        match self {
            GridModel::Linear { v } => v.iter().fold(0.0f64, |m, x| m.max(x.abs())),
            GridModel::Cubic { .. } => {
                u.values().iter().map(|z| z.norm()).fold(0.0f64, f64::max)
            }
        }
    }
}
