//! Exact split flows and the Lie / Strang time steps.
//!
//! The two half-problems of `i ∂ₜu = -Δu + f(x,|u|²) u` integrate exactly:
//!
//! * the free flow is diagonal in Fourier space, `Û_j ↦ e^{-it·j²} Û_j`
//!   (this sign fixes the convention for the whole crate; the closed-form
//!   resonant solutions in [`crate::resonance`] are its contract);
//! * the potential flow is diagonal in physical space,
//!   `U_k ↦ e^{-it·W_k} U_k` with `W_k = V_k` or `σ|U_k|²`.  For the cubic
//!   model `|U_k|` is conserved by this flow, so freezing `W` at the initial
//!   state is exact, not an approximation.
//!
//! One Lie step is `F_K⁻¹ ∘ e^{-iτ·j²} ∘ F_K ∘ potential(τ)`; one Strang
//! step wraps the free flow in two potential half-steps.  [`evolve`] iterates
//! either stepper, reports each state to an observer, and aborts with the
//! step index if a value turns non-finite.

use num_complex::Complex64;

use crate::dft::{forward_dft, inverse_dft};
use crate::error::CoreError;
use crate::grid::{Grid, PhysicalState, SpectralState};
use crate::model::GridModel;

/// Free Schrödinger flow in Fourier variables: `Û_j ↦ e^{-it·j²} Û_j`.
pub fn free_flow(grid: &Grid, hat: &SpectralState, t: f64) -> SpectralState {
    let mut out = hat.clone();
    for (slot, j) in grid.modes().enumerate() {
        let phase = Complex64::from_polar(1.0, -t * (j * j) as f64);
        out.coeffs_mut()[slot] *= phase;
    }
    out
}

/// Potential flow in physical variables: `U_k ↦ e^{-it·W_k} U_k`.
pub fn potential_flow(
    grid: &Grid,
    u: &PhysicalState,
    t: f64,
    model: &GridModel,
) -> PhysicalState {
    debug_assert_eq!(u.len(), grid.size());
    let w = model.phase_profile(u);
    let mut out = u.clone();
    for (value, wk) in out.values_mut().iter_mut().zip(w) {
        *value *= Complex64::from_polar(1.0, -t * wk);
    }
    out
}

/// One Lie step: potential flow for `τ`, then free flow for `τ`.
pub fn lie_step(grid: &Grid, u: &PhysicalState, tau: f64, model: &GridModel) -> PhysicalState {
    let kicked = potential_flow(grid, u, tau, model);
    let hat = forward_dft(grid, &kicked);
    inverse_dft(grid, &free_flow(grid, &hat, tau))
}

/// One Strang step: potential for `τ/2`, free for `τ`, potential for `τ/2`.
pub fn strang_step(grid: &Grid, u: &PhysicalState, tau: f64, model: &GridModel) -> PhysicalState {
    let half = potential_flow(grid, u, 0.5 * tau, model);
    let hat = forward_dft(grid, &half);
    let drifted = inverse_dft(grid, &free_flow(grid, &hat, tau));
    potential_flow(grid, &drifted, 0.5 * tau, model)
}

/// Which composition [`evolve`] iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stepper {
    Lie,
    Strang,
}

/// Iterate `n_steps` steps of size `tau` from `u0`, feeding `(n, state)` to
/// the observer — the initial state as `(0, u0)`, then each step.  Returns
/// the final state, or [`CoreError::NonFinite`] naming the first step that
/// produced a non-finite value.
pub fn evolve<F>(
    grid: &Grid,
    u0: &PhysicalState,
    tau: f64,
    n_steps: usize,
    model: &GridModel,
    stepper: Stepper,
    mut observe: F,
) -> Result<PhysicalState, CoreError>
where
    F: FnMut(usize, &PhysicalState),
{
    if !u0.is_finite() {
        return Err(CoreError::NonFinite { step: 0 });
    }
    observe(0, u0);
    let mut state = u0.clone();
    for n in 1..=n_steps {
        state = match stepper {
            Stepper::Lie => lie_step(grid, &state, tau, model),
            Stepper::Strang => strang_step(grid, &state, tau, model),
        };
        if !state.is_finite() {
            return Err(CoreError::NonFinite { step: n });
        }
        observe(n, &state);
    }
    Ok(state)
}
