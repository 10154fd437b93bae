//! Normalized discrete Fourier transform on the centered mode set.
//!
//! Conventions (these fix every other constant in the crate):
//!
//! ```text
//! forward:  Û_j = (1/K) Σ_{k ∈ B^K} e^{-2iπjk/K} U_k
//! inverse:  U_k =       Σ_{j ∈ B^K} e^{+2iπkj/K} Û_j
//! ```
//!
//! so `√K · F_K` is unitary and Parseval reads
//! `Σ_k |U_k|² = K Σ_j |Û_j|²`.  The fast path delegates to `rustfft` after
//! rotating between signed-index storage and the 0-based layout the FFT
//! expects; [`reference_forward_dft`] / [`reference_inverse_dft`] evaluate
//! the same sums directly in `O(K²)` with exact integer phase reduction and
//! serve as the oracle the fast path is tested against (and as the
//! independent route inside the verification suite).

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::{Grid, PhysicalState, SpectralState};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(k: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(k, direction))
}

/// Rotate between signed-index storage (slot 0 ↔ index `-K/2`) and the
/// 0-based layout (slot 0 ↔ index `0`).  Rotating by `K/2` is its own
/// inverse, so the same call converts in both directions.
fn swap_layout(buf: &mut [Complex64]) {
    let half = buf.len() / 2;
    buf.rotate_left(half);
}

/// Forward transform `U ↦ Û` with the `1/K` normalization.
pub fn forward_dft(grid: &Grid, state: &PhysicalState) -> SpectralState {
    let k = grid.size();
    debug_assert_eq!(state.len(), k);
    let mut buf = state.values().to_vec();
    swap_layout(&mut buf);
    plan(k, FftDirection::Forward).process(&mut buf);
    swap_layout(&mut buf);
    let scale = 1.0 / k as f64;
    for c in &mut buf {
        *c *= scale;
    }
    SpectralState::new(grid, buf).expect("buffer length equals grid size")
}

/// Inverse transform `Û ↦ U` (no normalization factor).
pub fn inverse_dft(grid: &Grid, spectrum: &SpectralState) -> PhysicalState {
    let k = grid.size();
    debug_assert_eq!(spectrum.len(), k);
    let mut buf = spectrum.coeffs().to_vec();
    swap_layout(&mut buf);
    plan(k, FftDirection::Inverse).process(&mut buf);
    swap_layout(&mut buf);
    PhysicalState::new(grid, buf).expect("buffer length equals grid size")
}

/// Unit-modulus phase `e^{2iπ·num/K}` with the exponent reduced mod `K`
/// in integer arithmetic, so phases that are mathematically equal are
/// bit-identical floats.
pub(crate) fn unit_phase(num: i64, k: usize) -> Complex64 {
    let k = k as i64;
    let r = num.rem_euclid(k);
    let angle = 2.0 * std::f64::consts::PI * r as f64 / k as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// Direct `O(K²)` evaluation of the forward sum.
pub fn reference_forward_dft(grid: &Grid, state: &PhysicalState) -> SpectralState {
    let k = grid.size();
    let mut coeffs = vec![Complex64::ZERO; k];
    for (slot_j, j) in grid.modes().enumerate() {
        let mut acc = Complex64::ZERO;
        for kk in grid.modes() {
            acc += unit_phase(-j * kk, k) * state.at(grid, kk);
        }
        coeffs[slot_j] = acc / k as f64;
    }
    SpectralState::new(grid, coeffs).expect("constructed at grid size")
}

/// Direct `O(K²)` evaluation of the inverse sum.
pub fn reference_inverse_dft(grid: &Grid, spectrum: &SpectralState) -> PhysicalState {
    let k = grid.size();
    let mut values = vec![Complex64::ZERO; k];
    for (slot_k, kk) in grid.modes().enumerate() {
        let mut acc = Complex64::ZERO;
        for j in grid.modes() {
            acc += unit_phase(kk * j, k) * spectrum.at(grid, j);
        }
        values[slot_k] = acc;
    }
    PhysicalState::new(grid, values).expect("constructed at grid size")
}

/// Relative `ℓ²` distance between two complex slices, with an absolute
/// floor so the zero vector compares equal to roundoff noise.
pub fn relative_l2_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "comparing slices of different lengths");
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    diff / scale.max(1e-300)
}
