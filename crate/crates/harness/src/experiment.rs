//! Running one configured experiment and summarizing the result.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use splitstep::error::CoreError;
use splitstep::flows::{evolve, Stepper};
use splitstep::norms::norm_report;
use splitstep::resonance::{
    bound_constants, membership_defect, scheme_h1_lower_bound, BoundConstants, BoundValue,
};

use crate::config::{ExperimentConfig, StepSpec};
use crate::HarnessError;

/// One row of the trajectory table.
///
/// `h1_lower_bound` carries the scheme-level guarantee
/// `(4/π²)·nτ·c0 − (π/2)·h1(U⁰)` and is only populated while `n` is within
/// the certified horizon of a resonant run; `membership_defect` is only
/// populated for resonant runs.  Both stay `None` (blank CSV cells)
/// otherwise, so a missing value is machine-distinguishable from `0.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub n: u64,
    pub t: f64,
    pub l2: f64,
    pub h1: f64,
    pub kinetic_tk: f64,
    pub energy_hk: f64,
    pub h1_lower_bound: Option<f64>,
    pub membership_defect: Option<f64>,
}

/// What kind of step the run used, as far as the resonance machinery is
/// concerned.  A rational step whose denominator does not set up a
/// compatible subspace on this grid gets no drift guarantees, exactly like
/// a float step; the distinction is still recorded because such steps are
/// the natural contrast runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepClassification {
    Resonant { p: u64, q: u64, power: u8, kappa: usize },
    NonResonantRational { p: u64, q: u64, power: u8 },
    NonResonantFloat { tau: f64 },
}

impl StepClassification {
    pub fn is_resonant(&self) -> bool {
        matches!(self, StepClassification::Resonant { .. })
    }
}

/// Least-squares line through `(t, h1)` over a window of step indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the fitted line from the data.
    pub residual: f64,
    pub window_start: u64,
    pub window_end: u64,
}

/// The constants of the certified bounds as actually assembled, so a
/// consumer of the JSON can re-evaluate every bound without re-deriving
/// the prefactors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssembledConstants {
    /// Slope of the scheme-level h¹ bound per unit time: `(4/π²)·c0`.
    pub scheme_slope: f64,
    /// Offset of the scheme-level bound: `(π/2)·h1(U⁰)`.
    pub scheme_offset: f64,
    /// Slope of the potential-flow bound per unit time: `(2/π)·c0`.
    pub flow_slope: f64,
    /// Offset of the potential-flow bound: `h1(U⁰)`.
    pub flow_offset: f64,
}

/// Everything about a finished run except the per-step table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub tau: f64,
    /// `τ·K²` — the resonant fixtures hold this at `8π` across grids.
    pub cfl_number: f64,
    pub classification: StepClassification,
    pub constants: BoundConstants,
    pub assembled: AssembledConstants,
    pub drift_fit: Option<DriftFit>,
    /// Version tags for the conventions baked into the numbers, so files
    /// from different builds can be compared safely.
    pub conventions: BTreeMap<String, String>,
}

/// Convention tags recorded in every JSON summary.  Bump a tag's `v` when
/// the corresponding choice changes meaning, never silently.
pub fn convention_tags() -> BTreeMap<String, String> {
    let mut tags = BTreeMap::new();
    let mut tag = |k: &str, v: &str| tags.insert(k.to_string(), v.to_string());
    tag("kinetic", "T^K = Σ j²|Û_j|², modes in B^K (v1)");
    tag("energy", "H^K = π·T^K + (π/K)·Σ V|U|²  or  + (σ/4)·δx·Σ|U|⁴ (v1)");
    tag("h1", "h¹ = forward-difference seminorm with weight 2π/K (v1)");
    tag("h1_lower_bound_column", "scheme bound (4/π²)nτc0 − (π/2)h1₀, blank past horizon (v1)");
    tag("csv_floats", "printf {:.16e}, blank for inapplicable cells (v1)");
    tag("control_step", "τ = 2π·34/55, golden-ratio convergent (v1)");
    tags
}

/// Classify the configured step against the configured grid.
pub fn classify_step(config: &ExperimentConfig) -> Result<StepClassification, HarnessError> {
    match config.step {
        StepSpec::Float { tau } => Ok(StepClassification::NonResonantFloat { tau }),
        StepSpec::Rational { .. } => {
            let step = config.step.as_resonant().expect("rational")?;
            let grid = config.grid()?;
            match step.kappa(&grid) {
                Ok(kappa) => Ok(StepClassification::Resonant {
                    p: step.p(),
                    q: step.q(),
                    power: step.power(),
                    kappa,
                }),
                Err(_) => Ok(StepClassification::NonResonantRational {
                    p: step.p(),
                    q: step.q(),
                    power: step.power(),
                }),
            }
        }
    }
}

/// Measured membership of the run's data (and, for linear runs, its
/// potential) in the resonant subspace `W_q`.  The drift, energy, and
/// closed-form guarantees all require [`Self::all_hold`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceHypotheses {
    pub data_defect: f64,
    pub data_member: bool,
    /// `None` for cubic runs: the multiplier `σ|U|²` inherits membership
    /// from the state, so there is no separate hypothesis to measure.
    pub potential_defect: Option<f64>,
    pub potential_member: bool,
}

impl SubspaceHypotheses {
    pub fn all_hold(&self) -> bool {
        self.data_member && self.potential_member
    }
}

/// Measure the subspace hypotheses of a resonant run.  Fails only when
/// `q` is incompatible with the grid.
pub fn subspace_hypotheses(
    grid: &splitstep::grid::Grid,
    model: &splitstep::model::GridModel,
    u0: &splitstep::grid::PhysicalState,
    q: u64,
    l2_0: f64,
) -> Result<SubspaceHypotheses, HarnessError> {
    use splitstep::model::GridModel;
    let data_defect = membership_defect(grid, u0, q)?;
    let data_member = data_defect <= 1e-12 * l2_0.max(1.0);
    let (potential_defect, potential_member) = match model {
        GridModel::Linear { v } => {
            let values = v.iter().map(|&x| splitstep::C64::new(x, 0.0)).collect();
            let v_state = splitstep::grid::PhysicalState::new(grid, values)
                .expect("potential sampled on this grid");
            let defect = membership_defect(grid, &v_state, q)?;
            (Some(defect), defect <= 1e-12)
        }
        GridModel::Cubic { .. } => (None, true),
    };
    Ok(SubspaceHypotheses {
        data_defect,
        data_member,
        potential_defect,
        potential_member,
    })
}

/// Run the configured split-step trajectory (Lie splitting: full potential
/// kick, then the exact free flow) and record one row per step, including
/// row zero.  `n_steps = 0` still produces the initial row.
pub fn run_experiment(
    config: &ExperimentConfig,
) -> Result<(Vec<TrajectoryRecord>, ExperimentSummary), HarnessError> {
    config.validate()?;
    let grid = config.grid()?;
    let model = config.model_spec()?.on_grid(&grid)?;
    let u0 = config.initial_state(&grid)?;
    let tau = config.step.tau()?;
    let classification = classify_step(config)?;
    let constants = bound_constants(&grid, &model, &u0, tau);

    let subspace_q = match classification {
        StepClassification::Resonant { q, .. } => Some(q),
        _ => None,
    };

    let mut records = Vec::with_capacity(config.n_steps as usize + 1);
    let mut record_row = |n: usize, state: &splitstep::grid::PhysicalState| {
        let report = norm_report(&grid, state, &model);
        let n = n as u64;
        let h1_lower_bound = if classification.is_resonant() {
            match scheme_h1_lower_bound(&constants, n) {
                BoundValue::Value(b) => Some(b),
                BoundValue::OutOfHorizon => None,
            }
        } else {
            None
        };
        records.push(TrajectoryRecord {
            n,
            t: n as f64 * tau,
            l2: report.l2,
            h1: report.h1,
            kinetic_tk: report.kinetic_tk,
            energy_hk: report.energy_hk,
            h1_lower_bound,
            // Classification already proved q | K with even quotient, so the
            // defect cannot fail to be defined.
            membership_defect: subspace_q
                .map(|q| membership_defect(&grid, state, q).expect("classified resonant")),
        });
    };

    evolve(
        &grid,
        &u0,
        tau,
        config.n_steps as usize,
        &model,
        Stepper::Lie,
        |n, state| record_row(n, state),
    )?;

    let drift_fit =
        fit_drift_slope(&records, default_fit_window(&records, &constants)).ok();

    let summary = ExperimentSummary {
        config: config.clone(),
        tau,
        cfl_number: tau * (grid.size() as f64).powi(2),
        classification,
        assembled: AssembledConstants {
            scheme_slope: 4.0 / (std::f64::consts::PI * std::f64::consts::PI) * constants.c0,
            scheme_offset: std::f64::consts::FRAC_PI_2 * constants.h1_0,
            flow_slope: 2.0 / std::f64::consts::PI * constants.c0,
            flow_offset: constants.h1_0,
        },
        constants,
        drift_fit,
        conventions: convention_tags(),
    };
    Ok((records, summary))
}

/// Default window for the drift fit: the second half of the certified
/// horizon (clamped to the recorded range), or the second half of the run
/// when no horizon applies.  The early half is excluded because the bounds
/// carry O(1) offsets that a short fit would fold into the slope.
pub fn default_fit_window(
    records: &[TrajectoryRecord],
    constants: &BoundConstants,
) -> RangeInclusive<u64> {
    let last = records.last().map(|r| r.n).unwrap_or(0);
    let end = match constants.horizon_steps {
        Some(h) => h.min(last),
        None => last,
    };
    end.div_ceil(2)..=end
}

/// One row of the certified-bounds table.  Unlike [`TrajectoryRecord`]
/// this involves no simulation: it tabulates what the constants promise
/// ahead of time.  All cells are blank for non-resonant steps and past the
/// horizon — the guarantees simply end there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: u64,
    pub t: f64,
    /// Potential-flow bound `(2/π)·nτ·c0 − h1₀`.
    pub h1_flow_bound: Option<f64>,
    /// Split-scheme bound `(4/π²)·nτ·c0 − (π/2)·h1₀`.
    pub h1_scheme_bound: Option<f64>,
    /// Energy bound assembled from the scheme bound.
    pub energy_bound: Option<f64>,
}

/// Tabulate the certified bounds for steps `0..=n_steps` without running
/// anything.
pub fn bound_table(
    config: &ExperimentConfig,
) -> Result<(Vec<BoundRow>, BoundConstants, StepClassification), HarnessError> {
    config.validate()?;
    let grid = config.grid()?;
    let model = config.model_spec()?.on_grid(&grid)?;
    let u0 = config.initial_state(&grid)?;
    let tau = config.step.tau()?;
    let classification = classify_step(config)?;
    let constants = bound_constants(&grid, &model, &u0, tau);
    let kind = match config.equation {
        crate::config::Equation::Linear => splitstep::resonance::EnergyBoundKind::Linear,
        crate::config::Equation::Cubic => splitstep::resonance::EnergyBoundKind::Cubic {
            gn_constant: splitstep::batch::GN_RATIO_ENVELOPE,
        },
    };
    let claimed = match classification {
        StepClassification::Resonant { q, .. } => {
            subspace_hypotheses(&grid, &model, &u0, q, constants.l2_0)?.all_hold()
        }
        _ => false,
    };
    let rows = (0..=config.n_steps)
        .map(|n| {
            let cell = |b: BoundValue| match b {
                BoundValue::Value(v) if claimed => Some(v),
                _ => None,
            };
            BoundRow {
                n,
                t: n as f64 * tau,
                h1_flow_bound: cell(splitstep::resonance::h1_lower_bound(&constants, n)),
                h1_scheme_bound: cell(scheme_h1_lower_bound(&constants, n)),
                energy_bound: cell(splitstep::resonance::energy_lower_bound(&constants, kind, n)),
            }
        })
        .collect();
    Ok((rows, constants, classification))
}

/// Least-squares slope of `h1` against `t` over the rows whose step index
/// lies in `window`.  Returns the fitted line and the RMS residual.
pub fn fit_drift_slope(
    records: &[TrajectoryRecord],
    window: RangeInclusive<u64>,
) -> Result<DriftFit, HarnessError> {
    let rows: Vec<&TrajectoryRecord> =
        records.iter().filter(|r| window.contains(&r.n)).collect();
    let mut times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    times.dedup();
    if rows.len() < 2 || times.len() < 2 {
        return Err(CoreError::DegenerateFitWindow {
            points: rows.len(),
            distinct: times.len(),
        }
        .into());
    }

    let n = rows.len() as f64;
    let mean_t = rows.iter().map(|r| r.t).sum::<f64>() / n;
    let mean_h = rows.iter().map(|r| r.h1).sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sth = 0.0;
    for r in &rows {
        let dt = r.t - mean_t;
        stt += dt * dt;
        sth += dt * (r.h1 - mean_h);
    }
    let slope = sth / stt;
    let intercept = mean_h - slope * mean_t;
    let residual = (rows
        .iter()
        .map(|r| {
            let e = r.h1 - (slope * r.t + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DriftFit {
        slope,
        intercept,
        residual,
        window_start: *window.start(),
        window_end: *window.end(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn cubic_config(n_steps: u64) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(&format!(
            r#"
name = "cubic-k4"
equation = "cubic"
sigma = 1.0
k = 4
n_steps = {n_steps}

[initial]
kind = "fourier"
modes = [{{ mode = 0, re = 1.0 }}, {{ mode = -2, re = 0.5 }}]

[step]
p = 1
q = 2
power = 1
"#
        ))
        .unwrap()
    }

    #[test]
    fn zero_steps_still_yields_the_initial_row() {
        let (records, summary) = run_experiment(&cubic_config(0)).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].n, 0);
        assert_eq!(records[0].t, 0.0);
        assert!(summary.classification.is_resonant());
        // Degenerate one-row fit is reported as absent, not an error.
        assert!(summary.drift_fit.is_none());
    }

    #[test]
    fn l2_is_conserved_along_the_recorded_trajectory() {
        let (records, _) = run_experiment(&cubic_config(64)).unwrap();
        assert_eq!(records.len(), 65);
        let l2_0 = records[0].l2;
        for r in &records {
            assert!((r.l2 - l2_0).abs() <= 1e-11 * l2_0, "row {}: {}", r.n, r.l2);
        }
    }

    #[test]
    fn resonant_runs_fill_the_resonance_columns() {
        let (records, summary) = run_experiment(&cubic_config(8)).unwrap();
        // τ = π on K = 4 has horizon 0: bound column only on row zero.
        assert_eq!(summary.constants.horizon_steps, Some(0));
        assert!(records[0].h1_lower_bound.is_some());
        assert!(records[1..].iter().all(|r| r.h1_lower_bound.is_none()));
        for r in &records {
            let defect = r.membership_defect.expect("resonant run");
            assert!(defect < 1e-12, "row {}: defect {defect}", r.n);
        }
    }

    #[test]
    fn float_steps_classify_non_resonant_and_blank_the_columns() {
        let mut config = cubic_config(4);
        config.step = StepSpec::Float { tau: 0.37 };
        let (records, summary) = run_experiment(&config).unwrap();
        assert_eq!(
            summary.classification,
            StepClassification::NonResonantFloat { tau: 0.37 }
        );
        assert!(records
            .iter()
            .all(|r| r.h1_lower_bound.is_none() && r.membership_defect.is_none()));
    }

    #[test]
    fn rational_steps_off_the_grid_are_non_resonant() {
        // q = 3 does not divide K = 4.
        let mut config = cubic_config(4);
        config.step = StepSpec::Rational { p: 1, q: 3, power: 1 };
        let summary = run_experiment(&config).unwrap().1;
        assert_eq!(
            summary.classification,
            StepClassification::NonResonantRational { p: 1, q: 3, power: 1 }
        );
    }

    #[test]
    fn fit_recovers_an_exact_line_with_zero_residual() {
        let records: Vec<TrajectoryRecord> = (0..=20)
            .map(|n| TrajectoryRecord {
                n,
                t: 0.1 * n as f64,
                l2: 1.0,
                h1: 3.0 * (0.1 * n as f64) + 0.25,
                kinetic_tk: 0.0,
                energy_hk: 0.0,
                h1_lower_bound: None,
                membership_defect: None,
            })
            .collect();
        let fit = fit_drift_slope(&records, 0..=20).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12, "slope {}", fit.slope);
        assert!((fit.intercept - 0.25).abs() < 1e-12);
        assert!(fit.residual <= 1e-12, "residual {}", fit.residual);
    }

    #[test]
    fn fit_of_a_constant_has_zero_slope() {
        let records: Vec<TrajectoryRecord> = (0..=10)
            .map(|n| TrajectoryRecord {
                n,
                t: n as f64,
                l2: 1.0,
                h1: 2.5,
                kinetic_tk: 0.0,
                energy_hk: 0.0,
                h1_lower_bound: None,
                membership_defect: None,
            })
            .collect();
        let fit = fit_drift_slope(&records, 0..=10).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert!((fit.intercept - 2.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_windows_are_rejected() {
        let (records, _) = run_experiment(&cubic_config(4)).unwrap();
        let err = fit_drift_slope(&records, 2..=2).unwrap_err();
        assert!(err.to_string().contains("fit window"), "{err}");
        let err = fit_drift_slope(&records, 7..=9).unwrap_err();
        assert!(err.to_string().contains("fit window"), "{err}");
    }

    #[test]
    fn the_cfl_number_of_the_resonant_family_is_8_pi() {
        // τ = 2π/q² on K = 2q gives τK² = 8π for every q.
        for q in [4u64, 8, 16] {
            let config = ExperimentConfig::from_toml_str(&format!(
                r#"
name = "cfl-q{q}"
equation = "cubic"
sigma = 1.0
k = {k}
n_steps = 0

[initial]
kind = "fourier"
modes = [{{ mode = 0, re = 1.0 }}]

[step]
p = 1
q = {q}
power = 2
"#,
                k = 2 * q
            ))
            .unwrap();
            let summary = run_experiment(&config).unwrap().1;
            assert!(
                (summary.cfl_number - 8.0 * std::f64::consts::PI).abs() < 1e-12,
                "q = {q}: {}",
                summary.cfl_number
            );
        }
    }
}
