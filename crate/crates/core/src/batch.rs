//! Seeded random-state sweeps.
//!
//! Two inequalities in this crate carry *empirical* constants: the discrete
//! interpolation bound `δxΣ|U|⁴ ≤ C·‖U‖_h¹‖U‖³_ℓ²` and its continuous
//! relatives.  Their constants are not derived anywhere — we record a
//! ceiling observed over a documented distribution of random states and
//! freeze it, and the test suite re-runs the sweep to confirm the frozen
//! number still holds and is seed-stable.  The distribution matters: the
//! ratio is scale-invariant but blows up towards constant states (`h¹ → 0`
//! with mass fixed), so the families below deliberately avoid that corner
//! and say so.
//!
//! The sweeps are embarrassingly parallel and exist in `_seq`/`_par` pairs;
//! the bench suite compares the two.  Both produce bit-identical extremes
//! (`max`/`min` reductions are order-independent).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use num_complex::Complex64;

use crate::dft::{forward_dft, inverse_dft};
use crate::grid::{Grid, PhysicalState, SpectralState};
use crate::norms::{gn_ratio, h1_seminorm, kinetic_tk};
use crate::semidiscrete::{continuous_gn_ratio, continuous_linf_ratio, FourierFunction};

/// Frozen ceiling for the discrete ratio `δxΣ|U|⁴ / (‖U‖_h¹‖U‖³_ℓ²)` over
/// the sweep distribution ([`random_suite`]).  `examples/envelopes.rs`
/// measured maxima 0.520–0.556 across seeds {11, 12, 13, 99} with
/// K ∈ {8, 32, 128, 512} and 10³ states each; frozen with ~25% headroom.
/// Not a bound over all states — the ratio is unbounded as `h¹ → 0` at
/// fixed mass, which is exactly why degenerate states report no ratio.
pub const GN_RATIO_ENVELOPE: f64 = 0.70;

/// Frozen ceiling for `‖u‖⁴_{L⁴} / (‖u‖_{H¹}‖u‖³_{L²})` over random
/// truncated Fourier series ([`random_fourier`]).  Measured maxima
/// 1.86–1.98 across the same four seeds (bandwidths {2, 4, 8, 16, 24},
/// 200 series each); frozen with headroom.
pub const CONTINUOUS_GN_ENVELOPE: f64 = 2.4;

/// Frozen ceiling for `‖u‖²_{L∞} / (‖u‖_{L²}‖u‖_{H¹})` over the same
/// family; measured maxima 2.84–3.13.  The sup ratio has the fattest upper
/// tail of the three (it rewards rare in-phase alignment of coefficients),
/// hence the extra headroom.
pub const CONTINUOUS_LINF_ENVELOPE: f64 = 3.8;

/// One state with iid complex-uniform samples on `[-1,1]²` — rough data,
/// spectrum close to flat.
pub fn random_state(grid: &Grid, rng: &mut impl Rng) -> PhysicalState {
    let values = (0..grid.size())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    PhysicalState::new(grid, values).expect("length matches by construction")
}

/// One state with power-law spectral decay `|Û_j| ∼ (1+|j|)^{-α}`,
/// `α ∈ [0.5, 1.25)` — smoother data, where the quartic ratio is largest.
/// The exponent range is deliberately capped: stronger decay leaves the
/// seminorm hostage to a couple of low-mode draws, which fattens the upper
/// tail of the ratio and makes the observed maximum seed-dependent.
pub fn random_decayed_state(grid: &Grid, rng: &mut impl Rng) -> PhysicalState {
    let alpha: f64 = rng.random_range(0.5..1.25);
    let mut hat = SpectralState::zero(grid);
    for (slot, j) in grid.modes().enumerate() {
        let weight = (1.0 + j.unsigned_abs() as f64).powf(-alpha);
        hat.coeffs_mut()[slot] = Complex64::new(
            weight * rng.random_range(-1.0..1.0),
            weight * rng.random_range(-1.0..1.0),
        );
    }
    inverse_dft(grid, &hat)
}

/// Deterministic sweep population: `count` states from one seeded stream,
/// alternating the rough and smooth families.
pub fn random_suite(grid: &Grid, seed: u64, count: usize) -> Vec<PhysicalState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                random_state(grid, &mut rng)
            } else {
                random_decayed_state(grid, &mut rng)
            }
        })
        .collect()
}

/// Extremes recorded by a discrete ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioExtremes {
    /// Largest interpolation ratio seen.
    pub max_gn: f64,
    /// Smallest and largest `T^K(F_K U)/‖U‖²_h¹` — must bracket inside the
    /// equivalence window `[1/(2π), π/8]`.
    pub min_equiv: f64,
    pub max_equiv: f64,
    /// States whose ratios were undefined (constant/zero) and skipped.
    pub degenerate: usize,
    pub samples: usize,
}

impl RatioExtremes {
    fn empty() -> Self {
        Self {
            max_gn: f64::NEG_INFINITY,
            min_equiv: f64::INFINITY,
            max_equiv: f64::NEG_INFINITY,
            degenerate: 0,
            samples: 0,
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            max_gn: self.max_gn.max(other.max_gn),
            min_equiv: self.min_equiv.min(other.min_equiv),
            max_equiv: self.max_equiv.max(other.max_equiv),
            degenerate: self.degenerate + other.degenerate,
            samples: self.samples + other.samples,
        }
    }

    fn observe(grid: &Grid, u: &PhysicalState) -> Self {
        let mut out = Self::empty();
        out.samples = 1;
        let h1 = h1_seminorm(grid, u);
        match gn_ratio(grid, u) {
            Some(r) => out.max_gn = r,
            None => out.degenerate = 1,
        }
        if h1 > 0.0 {
            let equiv = kinetic_tk(grid, &forward_dft(grid, u)) / (h1 * h1);
            out.min_equiv = equiv;
            out.max_equiv = equiv;
        }
        out
    }
}

/// Scan the states one by one.
pub fn ratio_sweep_seq(grid: &Grid, states: &[PhysicalState]) -> RatioExtremes {
    states
        .iter()
        .map(|u| RatioExtremes::observe(grid, u))
        .fold(RatioExtremes::empty(), RatioExtremes::merge)
}

/// Scan the states across the rayon pool; extremes are identical to the
/// sequential scan because min/max reductions don't care about order.
#[cfg(feature = "parallel")]
pub fn ratio_sweep_par(grid: &Grid, states: &[PhysicalState]) -> RatioExtremes {
    states
        .par_iter()
        .map(|u| RatioExtremes::observe(grid, u))
        .reduce(RatioExtremes::empty, RatioExtremes::merge)
}

/// Whichever sweep the feature set provides.
pub fn ratio_sweep(grid: &Grid, states: &[PhysicalState]) -> RatioExtremes {
    #[cfg(feature = "parallel")]
    {
        ratio_sweep_par(grid, states)
    }
    #[cfg(not(feature = "parallel"))]
    {
        ratio_sweep_seq(grid, states)
    }
}

/// Full envelope measurement: `per_size` suite states on each grid size,
/// extremes merged across sizes.  Each size draws from its own substream
/// so adding sizes doesn't reshuffle the others.
pub fn gn_envelope(sizes: &[usize], per_size: usize, seed: u64) -> RatioExtremes {
    sizes
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let grid = crate::grid::make_grid(k).expect("sweep sizes are even and ≥ 4");
            let states = random_suite(&grid, seed.wrapping_add(i as u64), per_size);
            ratio_sweep(&grid, &states)
        })
        .fold(RatioExtremes::empty(), RatioExtremes::merge)
}

/// Random truncated Fourier series with iid complex-uniform coefficients
/// damped by `(1+|k|)^{-α}`, `α ∈ [1.0, 1.75)` (same tail-taming rationale
/// as [`random_decayed_state`]; the sup-norm ratio is the tail-sensitive
/// one here, and it spikes on rough draws).
pub fn random_fourier(max_mode: usize, rng: &mut impl Rng) -> FourierFunction {
    let alpha: f64 = rng.random_range(1.0..1.75);
    let m = max_mode as i64;
    let terms: Vec<(i64, Complex64)> = (-m..=m)
        .map(|k| {
            let weight = (1.0 + k.unsigned_abs() as f64).powf(-alpha);
            (
                k,
                Complex64::new(
                    weight * rng.random_range(-1.0..1.0),
                    weight * rng.random_range(-1.0..1.0),
                ),
            )
        })
        .collect();
    FourierFunction::from_modes(&terms)
}

/// Extremes of the continuous interpolation ratios over a random family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousExtremes {
    pub max_gn: f64,
    pub max_linf: f64,
    pub degenerate: usize,
    pub samples: usize,
}

/// Sweep random series over several bandwidths; quadrature-backed, so
/// noticeably slower per sample than the discrete sweep.
pub fn continuous_ratio_sweep(max_modes: &[usize], per_mode: usize, seed: u64) -> ContinuousExtremes {
    let mut out = ContinuousExtremes {
        max_gn: f64::NEG_INFINITY,
        max_linf: f64::NEG_INFINITY,
        degenerate: 0,
        samples: 0,
    };
    for (i, &m) in max_modes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        for _ in 0..per_mode {
            let u = random_fourier(m, &mut rng);
            out.samples += 1;
            match (continuous_gn_ratio(&u), continuous_linf_ratio(&u)) {
                (Some(g), Some(l)) => {
                    out.max_gn = out.max_gn.max(g);
                    out.max_linf = out.max_linf.max(l);
                }
                _ => out.degenerate += 1,
            }
        }
    }
    out
}
