//! Error type shared by the core modules.
//!
//! Every variant names the violated contract and carries the offending
//! values, so a failed precondition is diagnosable from the message alone.

use thiserror::Error;

/// Errors raised by grid construction, sampling, flows and bound assembly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// Grids must hold a centered mode set `{-K/2, …, K/2-1}`, so `K` is even.
    #[error("grid size K = {k} must be even so modes come in the centered range -K/2..K/2")]
    OddGridSize { k: usize },

    /// Below `K = 4` there is no nontrivial mode left after DC and Nyquist.
    #[error("grid size K = {k} is too small; the smallest supported grid is K = 4")]
    GridTooSmall { k: usize },

    /// Two states/grids that must match in size did not.
    #[error("size mismatch: expected {expected} grid points, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    /// A sampled mode falls on or beyond the Nyquist index and would alias.
    #[error(
        "mode m = {m} aliases on a K = {k} grid (|m| >= K/2 = {nyquist}); \
         pass allow_alias to fold it deliberately"
    )]
    AliasedMode { m: i64, k: usize, nyquist: i64 },

    /// Subspace operations need `q | K`.
    #[error("subspace period q = {q} does not divide the grid size K = {k}")]
    PeriodDoesNotDivide { q: u64, k: usize },

    /// Subspace operations additionally need an even quotient `κ = K/q`.
    #[error("quotient kappa = K/q = {kappa} must be even (K = {k}, q = {q})")]
    OddQuotient { kappa: usize, k: usize, q: u64 },

    /// Resonant steps are kept in lowest terms.  Power-1 steps reduce
    /// automatically; for power 2 a common factor changes the step family,
    /// so it is rejected instead.
    #[error("resonant step p/q = {p}/{q} has gcd {gcd} != 1; \
             power-{power} steps must be given in lowest terms")]
    NotCoprime { p: u64, q: u64, gcd: u64, power: u8 },

    /// Only `τ = 2πp/q` and `τ = 2πp/q²` are resonant families.
    #[error("resonant step power must be 1 or 2, got {got}")]
    InvalidStepPower { got: u8 },

    /// `q = 0` or `p = 0` never describes a step.
    #[error("resonant step requires p >= 1 and q >= 1, got p = {p}, q = {q}")]
    ZeroStepParameter { p: u64, q: u64 },

    /// The cubic coupling must be a sign.
    #[error("cubic coupling sigma must be +1 or -1, got {got}")]
    InvalidSigma { got: f64 },

    /// Potentials enter the equation as real multiplication operators.
    #[error("potential samples are not real: max |Im V_k| = {max_imag:.3e}")]
    PotentialNotReal { max_imag: f64 },

    /// A state picked up a non-finite value during time stepping.
    #[error("non-finite value produced at step {step}; aborting the trajectory")]
    NonFinite { step: usize },

    /// The quadrature backing a semidiscrete operation could not reach the
    /// requested accuracy.
    #[error(
        "spectral truncation residual {residual:.3e} exceeds the tolerance {tolerance:.3e}; \
         increase out_modes or the quadrature size"
    )]
    TruncationResidual { residual: f64, tolerance: f64 },

    /// A finitely supported Fourier function was declared real but its
    /// coefficients are not conjugate-symmetric.
    #[error(
        "coefficients are not conjugate-symmetric: |û({k}) - conj(û({minus_k}))| = {defect:.3e}"
    )]
    NotConjugateSymmetric { k: i64, minus_k: i64, defect: f64 },

    /// Closed forms on the resonant subspace require the data to lie in it.
    #[error(
        "input is not in the resonant subspace W_q with q = {q}: \
         membership defect {defect:.3e} exceeds {tolerance:.3e}"
    )]
    NotInSubspace { q: u64, defect: f64, tolerance: f64 },

    /// Least-squares fitting needs at least two distinct abscissae.
    #[error("fit window holds {points} point(s) with {distinct} distinct abscissae; need >= 2")]
    DegenerateFitWindow { points: usize, distinct: usize },
}
