//! Finite Fourier-series descriptions of grid functions and their samplers.
//!
//! A [`FunctionSpec`] is the grid-independent way experiments describe
//! potentials and initial data: a plane-wave mixture `Σ_m a_m e^{imx}` or the
//! cosine preset `a·cos(mx)`.  Sampling onto a grid uses integer-reduced
//! phases, so sampled values are exact to one rounding of `sin`/`cos`.
//!
//! Modes with `|m| ≥ K/2` are indistinguishable from lower ones on a `K`
//! grid; [`sample_function`] rejects them unless the caller opts into the
//! folding with `allow_alias`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dft::unit_phase;
use crate::error::CoreError;
use crate::grid::{Grid, PhysicalState, SpectralState};

/// One plane-wave term `(re + i·im) · e^{i·mode·x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAmplitude {
    pub mode: i64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl ModeAmplitude {
    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Grid-independent description of a finite Fourier series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// General plane-wave mixture `Σ a_m e^{imx}`.
    Fourier { modes: Vec<ModeAmplitude> },
    /// `amplitude · cos(mode · x)`, i.e. the symmetric pair
    /// `(amplitude/2)(e^{i·mode·x} + e^{-i·mode·x})`.
    Cosine { mode: i64, amplitude: f64 },
    /// Single wave `amplitude · e^{i·mode·x}`.
    PlaneWave { mode: i64, amplitude: f64 },
}

impl FunctionSpec {
    /// The series written out as explicit `(mode, amplitude)` terms.
    pub fn terms(&self) -> Vec<ModeAmplitude> {
        match self {
            FunctionSpec::Fourier { modes } => modes.clone(),
            FunctionSpec::Cosine { mode, amplitude } => vec![
                ModeAmplitude {
                    mode: *mode,
                    re: amplitude / 2.0,
                    im: 0.0,
                },
                ModeAmplitude {
                    mode: -mode,
                    re: amplitude / 2.0,
                    im: 0.0,
                },
            ],
            FunctionSpec::PlaneWave { mode, amplitude } => vec![ModeAmplitude {
                mode: *mode,
                re: *amplitude,
                im: 0.0,
            }],
        }
    }

    /// Largest |mode| appearing in the series (0 for the empty series).
    pub fn max_mode(&self) -> i64 {
        self.terms()
            .iter()
            .map(|t| t.mode.abs())
            .max()
            .unwrap_or(0)
    }

    /// Exact value `Σ a_m e^{imx}` at an arbitrary point.
    pub fn value_at(&self, x: f64) -> Complex64 {
        self.terms()
            .iter()
            .map(|t| t.amplitude() * Complex64::from_polar(1.0, t.mode as f64 * x))
            .sum()
    }
}

fn guard_aliasing(grid: &Grid, spec: &FunctionSpec, allow_alias: bool) -> Result<(), CoreError> {
    if allow_alias {
        return Ok(());
    }
    // B^K is asymmetric: -K/2 is a legal mode, +K/2 already folds onto it.
    let nyquist = grid.half();
    for term in spec.terms() {
        if !grid.contains_mode(term.mode) {
            return Err(CoreError::AliasedMode {
                m: term.mode,
                k: grid.size(),
                nyquist,
            });
        }
    }
    Ok(())
}

/// Sample a series onto the grid: `U_k = Σ_m a_m e^{i m x_k}`.
///
/// Out-of-range modes fold as `m ↦ m mod K` (into `B^K`); that folding is an
/// error unless `allow_alias` is set.
pub fn sample_function(
    grid: &Grid,
    spec: &FunctionSpec,
    allow_alias: bool,
) -> Result<PhysicalState, CoreError> {
    guard_aliasing(grid, spec, allow_alias)?;
    let terms = spec.terms();
    let mut values = vec![Complex64::ZERO; grid.size()];
    for (slot, j) in grid.modes().enumerate() {
        // e^{i m x_j} = e^{2iπ m j / K}: reduce m·j mod K exactly.
        values[slot] = terms
            .iter()
            .map(|t| t.amplitude() * unit_phase(t.mode * j, grid.size()))
            .sum();
    }
    PhysicalState::new(grid, values)
}

/// The exact spectrum of a sampled series: amplitudes accumulated on folded
/// modes, no transform roundoff.  Subject to the same aliasing guard.
pub fn exact_spectrum(
    grid: &Grid,
    spec: &FunctionSpec,
    allow_alias: bool,
) -> Result<SpectralState, CoreError> {
    guard_aliasing(grid, spec, allow_alias)?;
    let mut out = SpectralState::zero(grid);
    for term in spec.terms() {
        let folded = grid.fold_mode(term.mode);
        out.coeffs_mut()[grid.slot(folded)] += term.amplitude();
    }
    Ok(out)
}
