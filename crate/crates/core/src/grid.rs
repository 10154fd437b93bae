//! Centered Fourier grid on `[-π, π)` and the state vectors living on it.
//!
//! A grid of even size `K ≥ 4` carries the collocation points
//! `x_j = 2πj/K` and the signed mode set `B^K = {-K/2, …, K/2-1}`.  Both
//! physical values and spectral coefficients are stored in signed-index
//! order, i.e. slot `0` is index `-K/2`, so printed vectors read left to
//! right across the torus (resp. across the spectrum).  Conversion to the
//! 0-based layout an FFT expects happens inside [`crate::dft`] and never
//! leaks into results.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Even-sized collocation grid on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    k: usize,
}

/// Build a grid with `K` points; rejects odd or undersized `K`.
pub fn make_grid(k: usize) -> Result<Grid, CoreError> {
    if !k.is_multiple_of(2) {
        return Err(CoreError::OddGridSize { k });
    }
    if k < 4 {
        return Err(CoreError::GridTooSmall { k });
    }
    Ok(Grid { k })
}

impl Grid {
    /// Number of collocation points (= number of retained modes).
    pub fn size(&self) -> usize {
        self.k
    }

    /// Half the grid size, the Nyquist index `K/2`.
    pub fn half(&self) -> i64 {
        (self.k / 2) as i64
    }

    /// Mesh width `δx = 2π/K`.
    pub fn delta_x(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.k as f64
    }

    /// Collocation point `x_j = 2πj/K = j·δx` for a signed index `j ∈ B^K`.
    pub fn point(&self, j: i64) -> f64 {
        debug_assert!(self.contains_mode(j), "index {j} outside B^K");
        2.0 * std::f64::consts::PI * j as f64 / self.k as f64
    }

    /// All collocation points in signed order, `-π` first.
    pub fn points(&self) -> Vec<f64> {
        self.modes().map(|j| self.point(j)).collect()
    }

    /// Signed mode indices `-K/2, …, K/2-1` in storage order.
    pub fn modes(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        let half = self.half();
        (-half)..half
    }

    /// Whether a signed index lies in `B^K`.
    pub fn contains_mode(&self, j: i64) -> bool {
        let half = self.half();
        (-half..half).contains(&j)
    }

    /// Storage slot of a signed index.
    pub fn slot(&self, j: i64) -> usize {
        debug_assert!(self.contains_mode(j), "index {j} outside B^K");
        (j + self.half()) as usize
    }

    /// Signed index stored in a slot.
    pub fn mode_at(&self, slot: usize) -> i64 {
        debug_assert!(slot < self.k, "slot {slot} outside the grid");
        slot as i64 - self.half()
    }

    /// Fold an arbitrary signed index into `B^K` (mod `K`).
    pub fn fold_mode(&self, j: i64) -> i64 {
        let k = self.k as i64;
        (j + self.half()).rem_euclid(k) - self.half()
    }
}

/// Grid values `U_k`, one complex number per collocation point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    values: Vec<Complex64>,
}

/// Fourier coefficients `Û_j`, one per signed mode in `B^K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    coeffs: Vec<Complex64>,
}

impl PhysicalState {
    /// Wrap a value vector; its length must match the grid.
    pub fn new(grid: &Grid, values: Vec<Complex64>) -> Result<Self, CoreError> {
        if values.len() != grid.size() {
            return Err(CoreError::SizeMismatch {
                expected: grid.size(),
                got: values.len(),
            });
        }
        Ok(Self { values })
    }

    /// The zero state.
    pub fn zero(grid: &Grid) -> Self {
        Self {
            values: vec![Complex64::ZERO; grid.size()],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Value at a signed index `k ∈ B^K`.
    pub fn at(&self, grid: &Grid, k: i64) -> Complex64 {
        self.values[grid.slot(k)]
    }

    /// True if every component is finite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl SpectralState {
    /// Wrap a coefficient vector; its length must match the grid.
    pub fn new(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self, CoreError> {
        if coeffs.len() != grid.size() {
            return Err(CoreError::SizeMismatch {
                expected: grid.size(),
                got: coeffs.len(),
            });
        }
        Ok(Self { coeffs })
    }

    /// The zero spectrum.
    pub fn zero(grid: &Grid) -> Self {
        Self {
            coeffs: vec![Complex64::ZERO; grid.size()],
        }
    }

    /// Unit mass on a single signed mode `j`.
    pub fn unit_mode(grid: &Grid, j: i64) -> Self {
        let mut s = Self::zero(grid);
        s.coeffs[grid.slot(j)] = Complex64::ONE;
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at a signed mode `j ∈ B^K`.
    pub fn at(&self, grid: &Grid, j: i64) -> Complex64 {
        self.coeffs[grid.slot(j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn four_point_grid_matches_hand_values() {
        let g = make_grid(4).expect("K = 4 is valid");
        assert_eq!(g.delta_x(), PI / 2.0, "delta_x = 2*pi/4");
        let pts = g.points();
        let expected = [-PI, -PI / 2.0, 0.0, PI / 2.0];
        for (p, e) in pts.iter().zip(expected) {
            assert!((p - e).abs() < 1e-15, "point {p} should be {e}");
        }
    }

    #[test]
    fn eight_point_mode_set_is_centered() {
        let g = make_grid(8).unwrap();
        let modes: Vec<i64> = g.modes().collect();
        assert_eq!(modes, vec![-4, -3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn odd_and_tiny_sizes_are_rejected_with_named_constraint() {
        let e5 = make_grid(5).unwrap_err();
        assert!(
            e5.to_string().contains("even"),
            "odd-K diagnostic should name the evenness constraint, got: {e5}"
        );
        let e2 = make_grid(2).unwrap_err();
        assert!(
            e2.to_string().contains("smallest supported"),
            "tiny-K diagnostic should name the minimum size, got: {e2}"
        );
    }

    #[test]
    fn slots_and_modes_are_inverse() {
        let g = make_grid(16).unwrap();
        for j in g.modes() {
            assert_eq!(g.mode_at(g.slot(j)), j);
        }
        assert_eq!(g.fold_mode(8), -8, "K/2 folds to -K/2");
        assert_eq!(g.fold_mode(-9), 7);
        assert_eq!(g.fold_mode(17), 1);
    }

    #[test]
    fn state_length_is_enforced() {
        let g = make_grid(4).unwrap();
        let err = PhysicalState::new(&g, vec![Complex64::ZERO; 3]).unwrap_err();
        assert_eq!(
            err,
            CoreError::SizeMismatch {
                expected: 4,
                got: 3
            }
        );
    }
}
