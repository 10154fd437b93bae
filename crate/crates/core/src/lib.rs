//! Spectral split-step toolkit for the cubic / linear Schrödinger equation on
//! the torus `[-π, π)`.
//!
//! The crate simulates `i ∂ₜu = -Δu + f(x, |u|²) u` with a Fourier
//! pseudo-spectral discretization in space and Lie / Strang splitting in time,
//! and exposes the machinery needed to certify two regimes of the integrator:
//!
//! * **resonant time steps** `τ = 2πp/q` or `2πp/q²` on initial data whose
//!   spectrum lives on multiples of `q`, where the discrete Sobolev norm grows
//!   linearly and the discrete energy quadratically, with explicit lower
//!   bounds assembled in [`resonance`];
//! * **generic steps**, where the split scheme conserves the discrete `ℓ²`
//!   norm to roundoff and serves as the control leg of the experiments.
//!
//! Module layout:
//!
//! * [`grid`] — centered Fourier grid, physical/spectral state vectors;
//! * [`dft`] — normalized forward/inverse transforms plus an `O(K²)`
//!   reference implementation used as an oracle;
//! * [`sample`] — finite Fourier-series samplers with an aliasing guard;
//! * [`norms`] — discrete `ℓ²`, `h¹`, `ℓ∞`, quartic and energy functionals;
//! * [`flows`] — exact split flows, Lie/Strang steps, trajectory driver;
//! * [`resonance`] — resonant steps, the `W_{κ,q}` subspace, commutator and
//!   identity defects, and the drift/energy lower bounds;
//! * [`semidiscrete`] — space-continuous counterparts (truncated Fourier
//!   series) used as an independent oracle layer;
//! * [`batch`] — randomized state sweeps (sequential and data-parallel).
//!
//! With the default `parallel` feature the batch sweeps and the commutator
//! scan fan out over rayon; disabling it swaps in sequential loops with
//! identical results.

pub mod batch;
pub mod dft;
pub mod error;
pub mod flows;
pub mod grid;
pub mod model;
pub mod norms;
pub mod resonance;
pub mod sample;
pub mod semidiscrete;

pub use error::CoreError;
pub use model::ModelSpec;
pub use grid::{Grid, PhysicalState, SpectralState};
pub use resonance::ResonantStep;
pub use sample::FunctionSpec;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
