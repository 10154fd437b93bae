//! Acceptance suite: every certified property of the simulator, graded at
//! its stated tolerance.  One test per criterion; the test result line is
//! the pass/fail record, and each test prints its measured figures for
//! `--nocapture` runs.
//!
//! These tests intentionally re-derive their expectations from first
//! principles (explicit constants, hand-built states, independent closed
//! forms) instead of trusting the library's own bookkeeping wherever that
//! is feasible.

use std::f64::consts::PI;

use splitstep::batch::{
    continuous_ratio_sweep, gn_envelope, random_suite, CONTINUOUS_GN_ENVELOPE,
    CONTINUOUS_LINF_ENVELOPE, GN_RATIO_ENVELOPE,
};
use splitstep::dft::{forward_dft, inverse_dft, relative_l2_distance};
use splitstep::flows::{evolve, free_flow, Stepper};
use splitstep::grid::{make_grid, Grid, PhysicalState};
use splitstep::model::ModelSpec;
use splitstep::norms::{energy_hk, h1_seminorm, kinetic_tk, l2_norm, EQUIV_LOWER, EQUIV_UPPER};
use splitstep::resonance::{
    bound_constants, commutator_defect, energy_lower_bound, free_flow_identity_defect,
    h1_lower_bound, BoundValue, EnergyBoundKind, ResonantStep,
};
use splitstep::sample::{sample_function, FunctionSpec, ModeAmplitude};
use splitstep::semidiscrete::{
    closed_form_cubic, closed_form_linear, continuous_energy, hs_norm, squared_modulus,
    product_l2_norm, FourierFunction, SemiDiscreteModel,
};
use splitstep::C64;

use splitstep_harness::config::ExperimentConfig;
use splitstep_harness::experiment::run_experiment;

fn fourier(modes: &[(i64, f64, f64)]) -> FunctionSpec {
    FunctionSpec::Fourier {
        modes: modes
            .iter()
            .map(|&(mode, re, im)| ModeAmplitude { mode, re, im })
            .collect(),
    }
}

fn state(grid: &Grid, modes: &[(i64, f64, f64)]) -> PhysicalState {
    sample_function(grid, &fourier(modes), false).expect("modes chosen inside the grid")
}

/// Plain least-squares line through `(x, y)` points; returns
/// `(slope, rms_residual, range_of_y)`.
fn fit_line(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    assert!(points.len() >= 2, "fit needs at least two points");
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sty: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sty / stt;
    let intercept = my - slope * mx;
    let rms = (points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    (slope, rms, max - min)
}

/// ℓ² conservation along 10³-step trajectories of both equations on every
/// grid size, to 1e-11 relative.
#[test]
fn criterion_01_l2_conservation() {
    let initial = &[(0, 1.0, 0.0), (1, 0.4, 0.2), (-2, 0.0, 0.3)];
    let tau = splitstep_harness::config::control_step_tau();
    for k in [4usize, 8, 64, 256] {
        let grid = make_grid(k).unwrap();
        let u0 = state(&grid, initial);
        let models = [
            ModelSpec::Linear {
                potential: FunctionSpec::Cosine {
                    mode: 1,
                    amplitude: 0.8,
                },
            },
            ModelSpec::Cubic { sigma: -1.0 },
        ];
        for spec in &models {
            let model = spec.on_grid(&grid).unwrap();
            for stepper in [Stepper::Lie, Stepper::Strang] {
                let l2_0 = l2_norm(&grid, &u0);
                let mut worst = 0.0f64;
                evolve(&grid, &u0, tau, 1000, &model, stepper, |_, u| {
                    worst = worst.max((l2_norm(&grid, u) - l2_0).abs() / l2_0);
                })
                .unwrap();
                assert!(
                    worst <= 1e-11,
                    "K={k} {spec:?} {stepper:?}: relative drift {worst:.3e}"
                );
                println!("criterion 1: K={k} {spec:?} {stepper:?} drift {worst:.3e}");
            }
        }
    }
}

/// Commutator of the resonant free flow with a subspace potential
/// vanishes; with an off-subspace potential it is order one.
#[test]
fn criterion_02_commutator() {
    for (q, p, k) in [(2u64, 1u64, 8usize), (3, 2, 12), (4, 3, 16)] {
        let grid = make_grid(k).unwrap();
        let step = ResonantStep::new(p, q, 1).unwrap();
        let v = sample_function(
            &grid,
            &FunctionSpec::Cosine {
                mode: q as i64,
                amplitude: 1.0,
            },
            false,
        )
        .unwrap();
        let defect = commutator_defect(&grid, step, &v);
        assert!(defect <= 1e-12, "(q,p,K)=({q},{p},{k}): defect {defect:.3e}");
        println!("criterion 2: (q,p,K)=({q},{p},{k}) defect {defect:.3e}");
    }
    // cos(x) has modes ±1, which are not multiples of q = 2: no
    // cancellation, macroscopic commutator.
    let grid = make_grid(8).unwrap();
    let step = ResonantStep::new(1, 2, 1).unwrap();
    let v = sample_function(
        &grid,
        &FunctionSpec::Cosine {
            mode: 1,
            amplitude: 1.0,
        },
        false,
    )
    .unwrap();
    let defect = commutator_defect(&grid, step, &v);
    assert!(defect >= 1e-2, "cos(x) defect should be macroscopic: {defect:.3e}");
    println!("criterion 2: cos(x) control defect {defect:.3e}");
}

/// The resonant free flow is the identity on the subspace, for both
/// step-denominator powers.
#[test]
fn criterion_03_free_flow_identity() {
    for (q, p, k) in [(2u64, 1u64, 8usize), (3, 2, 12), (4, 3, 16)] {
        let grid = make_grid(k).unwrap();
        for power in [1u8, 2] {
            let step = ResonantStep::new(p, q, power).unwrap();
            let defect = free_flow_identity_defect(&grid, &step).unwrap();
            assert!(
                defect <= 1e-13,
                "(q,p,K)=({q},{p},{k}) power {power}: defect {defect:.3e}"
            );
            println!("criterion 3: (q,p,K)=({q},{p},{k}) power {power} defect {defect:.3e}");
        }
    }
}

/// 10³ Lie steps equal the closed forms: a pure phase multiplication for
/// resonant cubic data, and free-flow ∘ potential-phase for the linear
/// equation with a subspace potential (data arbitrary).
#[test]
fn criterion_04_closed_forms() {
    let n: usize = 1000;

    // Cubic, power 1 and power 2, data in the subspace.  Amplitudes are
    // kept moderate so the per-step nonlinear phase stays ~1 radian:
    // the comparison certifies the splitting, not phase-wrap roundoff.
    let cubic_cases = [
        (8usize, ResonantStep::new(1, 2, 1).unwrap(), vec![(0, 0.3, 0.0), (-2, 0.15, 0.0), (2, 0.0, 0.075)]),
        (16, ResonantStep::new(1, 4, 2).unwrap(), vec![(0, 0.5, 0.0), (-4, 0.25, 0.0), (4, 0.0, 0.125)]),
    ];
    for (k, step, modes) in cubic_cases {
        let grid = make_grid(k).unwrap();
        let sigma = 1.0;
        let model = ModelSpec::Cubic { sigma }.on_grid(&grid).unwrap();
        let u0 = state(&grid, &modes);
        let tau = step.tau();
        let simulated = evolve(&grid, &u0, tau, n, &model, Stepper::Lie, |_, _| {}).unwrap();
        let t = n as f64 * tau;
        let closed: Vec<C64> = u0
            .values()
            .iter()
            .map(|&z| z * C64::from_polar(1.0, -sigma * t * z.norm_sqr()))
            .collect();
        let distance = relative_l2_distance(simulated.values(), &closed);
        assert!(distance <= 1e-10, "cubic K={k}: distance {distance:.3e}");
        println!("criterion 4: cubic K={k} n={n} distance {distance:.3e}");
    }

    // Linear with V in the subspace and data deliberately outside it.
    let grid = make_grid(8).unwrap();
    let step = ResonantStep::new(1, 2, 1).unwrap();
    let tau = step.tau();
    let v_values = sample_function(
        &grid,
        &FunctionSpec::Cosine {
            mode: 2,
            amplitude: 0.6,
        },
        false,
    )
    .unwrap();
    let model = ModelSpec::Linear {
        potential: FunctionSpec::Cosine {
            mode: 2,
            amplitude: 0.6,
        },
    }
    .on_grid(&grid)
    .unwrap();
    let u0 = state(&grid, &[(1, 1.0, 0.0), (-3, 0.0, 0.5), (2, 0.25, 0.0)]);
    let simulated = evolve(&grid, &u0, tau, n, &model, Stepper::Lie, |_, _| {}).unwrap();
    let t = n as f64 * tau;
    let kicked: Vec<C64> = u0
        .values()
        .iter()
        .zip(v_values.values())
        .map(|(&z, v)| z * C64::from_polar(1.0, -t * v.re))
        .collect();
    let kicked = PhysicalState::new(&grid, kicked).unwrap();
    let closed = inverse_dft(&grid, &free_flow(&grid, &forward_dft(&grid, &kicked), t));
    let distance = relative_l2_distance(simulated.values(), closed.values());
    assert!(distance <= 1e-10, "linear: distance {distance:.3e}");
    println!("criterion 4: linear K=8 n={n} distance {distance:.3e}");
}

/// The hand-checked K = 4 fixture: constants come out exactly, and the
/// potential-flow drift bound holds on every step inside its horizon.
#[test]
fn criterion_05_drift_bound_fixture() {
    let grid = make_grid(4).unwrap();
    let model = ModelSpec::Cubic { sigma: 1.0 }.on_grid(&grid).unwrap();
    let u0 = state(&grid, &[(0, 1.0, 0.0), (-2, 0.5, 0.0)]);
    let expected: Vec<f64> = vec![1.5, 0.5, 1.5, 0.5];
    for (z, e) in u0.values().iter().zip(&expected) {
        assert!((z - C64::new(*e, 0.0)).norm() < 1e-15, "fixture state mismatch");
    }

    let tau = PI;
    let constants = bound_constants(&grid, &model, &u0, tau);
    assert!((constants.c0 - (40.0 / PI).sqrt()).abs() < 1e-12, "c0 = {}", constants.c0);
    assert!((constants.c1 - 4.0 / PI).abs() < 1e-12, "C1 = {}", constants.c1);
    assert!((constants.h1_0 - (8.0 / PI).sqrt()).abs() < 1e-12);

    // Horizon condition nτδx·C1 ≤ π with these numbers: 2πn ≤ π, so only
    // n = 0 qualifies; the loop checks every such n without assuming that.
    let delta_x = grid.delta_x();
    let mut trajectory = Vec::new();
    evolve(&grid, &u0, tau, 8, &model, Stepper::Lie, |_, u| {
        trajectory.push(h1_seminorm(&grid, u));
    })
    .unwrap();
    let mut checked = 0;
    for (n, h1) in trajectory.iter().enumerate() {
        if n as f64 * tau * delta_x * constants.c1 > PI {
            continue;
        }
        let bound = match h1_lower_bound(&constants, n as u64) {
            BoundValue::Value(b) => b,
            BoundValue::OutOfHorizon => panic!("n={n} satisfies the horizon condition"),
        };
        assert!(
            *h1 >= bound - 1e-9,
            "n={n}: h1 {h1:.6e} under bound {bound:.6e}"
        );
        checked += 1;
    }
    assert!(checked >= 1, "horizon admitted no steps at all");
    println!("criterion 5: checked {checked} in-horizon step(s), c0={:.6}, C1={:.6}", constants.c0, constants.c1);
}

fn energy_growth_case(name: &str, toml: &str, kind: EnergyBoundKind) {
    let config = ExperimentConfig::from_toml_str(toml).unwrap();
    let (records, summary) = run_experiment(&config).unwrap();
    let horizon = summary
        .constants
        .horizon_steps
        .expect("fixture has a finite horizon");
    assert!(
        config.n_steps >= horizon,
        "fixture must cover its horizon ({horizon})"
    );

    // Part one: the assembled energy bound holds on every in-horizon row.
    for r in records.iter().take(horizon as usize + 1) {
        if let BoundValue::Value(bound) = energy_lower_bound(&summary.constants, kind, r.n) {
            assert!(
                r.energy_hk >= bound - 1e-9,
                "{name} n={}: H^K {:.6e} under bound {bound:.6e}",
                r.n,
                r.energy_hk
            );
        }
    }

    // Part two: √H grows linearly over the second half of the horizon.
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.n >= horizon.div_ceil(2) && r.n <= horizon)
        .map(|r| (r.t, r.energy_hk.max(0.0).sqrt()))
        .collect();
    let (slope, rms, range) = fit_line(&points);
    assert!(slope > 0.0, "{name}: fitted slope {slope:.3e} not positive");
    assert!(
        rms <= 0.05 * range,
        "{name}: residual {rms:.3e} exceeds 5% of range {range:.3e}"
    );
    println!(
        "criterion 6: {name} horizon={horizon} slope={slope:.4} residual/range={:.2}%",
        100.0 * rms / range
    );
}

/// Quadratic-in-time energy growth under resonance, for one linear and
/// one cubic fixture: the certified bound holds inside the horizon, and
/// √H^K vs t fits a positive-slope line to within 5% of its range.
#[test]
fn criterion_06_energy_growth() {
    energy_growth_case(
        "linear",
        r#"
name = "energy-linear"
equation = "linear"
k = 256
n_steps = 81
seed = 0

[potential]
kind = "cosine"
mode = 2
amplitude = 0.25

[initial]
kind = "plane_wave"
mode = 2
amplitude = 1.0

[step]
p = 1
q = 2
power = 1
"#,
        EnergyBoundKind::Linear,
    );
    energy_growth_case(
        "cubic",
        r#"
name = "energy-cubic"
equation = "cubic"
sigma = 1.0
k = 64
n_steps = 85
seed = 0

[initial]
kind = "fourier"
modes = [{ mode = 0, re = 1.0 }, { mode = 16, re = 0.5 }, { mode = -16, im = 0.25 }]

[step]
p = 1
q = 16
power = 2
"#,
        EnergyBoundKind::Cubic {
            gn_constant: GN_RATIO_ENVELOPE,
        },
    );
}

/// The τ = 2π/q², K = 2q family sits at CFL number τK² = 8π exactly and
/// drifts by ≥ 5× over its horizon.  The τ/2 control (a rational step
/// whose denominator is incompatible with the grid) is reported alongside
/// for contrast, not asserted.
#[test]
fn criterion_07_cfl_family() {
    for q in [4u64, 8, 16] {
        let k = 2 * q as usize;
        let resonant = ExperimentConfig::from_toml_str(&format!(
            r#"
name = "cfl-q{q}"
equation = "cubic"
sigma = 1.0
k = {k}
n_steps = {n}
seed = 0

[initial]
kind = "fourier"
modes = [{{ mode = 0, re = 1.0 }}, {{ mode = -{q}, re = 0.1 }}]

[step]
p = 1
q = {q}
power = 2
"#,
            n = 20 * (q * q) / 16,
        ))
        .unwrap();
        let (records, summary) = run_experiment(&resonant).unwrap();
        assert_eq!(
            summary.cfl_number,
            8.0 * PI,
            "q={q}: τK² must equal 8π to the last bit"
        );
        let horizon = summary.constants.horizon_steps.unwrap();
        assert_eq!(records.last().unwrap().n, horizon, "run sized to its horizon");
        let growth = records[horizon as usize].h1 / records[0].h1;
        assert!(growth >= 5.0, "q={q}: growth {growth:.3} below 5x");

        // Control #1: τ/2, i.e. denominator 2q², which does not divide K.
        // Reported, not asserted — this step is a period-two resonance in
        // disguise and grows at half rate, which is itself instructive.
        let mut control = resonant.clone();
        control.name = format!("cfl-control-q{q}");
        control.step = splitstep_harness::config::StepSpec::Rational {
            p: 1,
            q: 2 * q * q,
            power: 1,
        };
        let (control_records, control_summary) = run_experiment(&control).unwrap();
        assert!(
            !control_summary.classification.is_resonant(),
            "control must classify non-resonant"
        );
        let control_growth = control_records[horizon as usize].h1 / control_records[0].h1;

        // Control #2: a genuinely non-resonant float step of comparable
        // size (golden-ratio convergent scaled into the same CFL regime);
        // over the same horizon its h¹ stays bounded within a factor 1.5.
        let mut float_control = resonant.clone();
        float_control.name = format!("cfl-float-q{q}");
        float_control.step = splitstep_harness::config::StepSpec::Float {
            tau: splitstep_harness::config::control_step_tau() / (q * q) as f64,
        };
        let (float_records, _) = run_experiment(&float_control).unwrap();
        let float_growth = float_records
            .iter()
            .map(|r| r.h1 / float_records[0].h1)
            .fold(0.0, f64::max);
        assert!(
            float_growth <= 1.5,
            "q={q}: float control drifted {float_growth:.3}x"
        );
        println!(
            "criterion 7: q={q} horizon={horizon} resonant growth {growth:.3}, \
             τ/2 control {control_growth:.3} [reported only], \
             float control max {float_growth:.3} (bounded ≤ 1.5)"
        );
    }
}

/// The kinetic functional is equivalent to h1² with constants 1/(2π) and
/// π/8, over random batches and with the extreme witnesses: the Nyquist
/// mode attains the upper constant, the lowest mode approaches the lower.
#[test]
fn criterion_08_norm_equivalence() {
    for k in [4usize, 8, 64, 256] {
        let grid = make_grid(k).unwrap();
        let states = random_suite(&grid, 11 + k as u64, 1000);
        for u in &states {
            let h1 = h1_seminorm(&grid, u);
            if h1 == 0.0 {
                continue;
            }
            let ratio = kinetic_tk(&grid, &forward_dft(&grid, u)) / (h1 * h1);
            assert!(
                (EQUIV_LOWER - 1e-12..=EQUIV_UPPER + 1e-12).contains(&ratio),
                "K={k}: ratio {ratio} escapes the window"
            );
        }

        let ratio_of = |mode: i64| {
            let u = state(&grid, &[(mode, 1.0, 0.0)]);
            let h1 = h1_seminorm(&grid, &u);
            kinetic_tk(&grid, &forward_dft(&grid, &u)) / (h1 * h1)
        };
        // The Nyquist plane wave attains π/8 exactly.
        let top = ratio_of(-(k as i64) / 2);
        assert!(
            (top - EQUIV_UPPER).abs() <= 1e-12,
            "K={k}: Nyquist ratio {top} vs π/8"
        );
        // The slowest mode approaches 1/(2π) from above as K grows:
        // ratio = θ²/(2π sin²θ) with θ = π/K, and θ²/sin²θ ≤ 1 + θ².
        let theta = PI / k as f64;
        let low = ratio_of(1);
        assert!(
            low > EQUIV_LOWER && low <= EQUIV_LOWER * (1.0 + theta * theta),
            "K={k}: low-mode ratio {low} not approaching 1/(2π)"
        );
        println!(
            "criterion 8: K={k} batch of {} inside window, witnesses {:.6} / {:.6}",
            states.len(),
            low,
            top
        );
    }
}

/// Continuous-in-space analogues at quadrature scale: the split flow's
/// H¹ norm and energy dominate the certified growth bounds for n ≤ 64,
/// with margins no worse than the measured truncation residual.
#[test]
fn criterion_09_semidiscrete_growth() {
    let slack = 1e-9; // float dust on top of the measured residual

    // Linear: u⁰ = (e^{ix} + e^{-ix})/√2, V = cos 2x, τ = 2π/2.
    let amp = 0.5f64.sqrt();
    let u0 = FourierFunction::from_modes(&[(1, C64::new(amp, 0.0)), (-1, C64::new(amp, 0.0))]);
    let v = FourierFunction::from_modes(&[(2, C64::new(0.5, 0.0)), (-2, C64::new(0.5, 0.0))]);
    let tau = PI;
    let c0 = product_l2_norm(&v.derivative(), &u0);
    assert!((c0 - 2.0f64.sqrt()).abs() < 1e-12, "linear c0 = {c0}");
    let h1_0 = hs_norm(&u0, 1.0);
    let l2_0 = hs_norm(&u0, 0.0);
    // c' = ‖u⁰‖_H¹ + √‖V‖_∞·‖u⁰‖_L²  (potential term of H bounded by
    // ½‖V‖_∞‖u‖²_L²); the parabola is clamped at its vertex since only a
    // lower bound on ‖∂u‖ is known.
    let c_prime = h1_0 + 1.0f64.sqrt() * l2_0;
    let model = SemiDiscreteModel::Linear { v: v.clone() };
    for n in 0..=64u64 {
        let result = closed_form_linear(&u0, &v, 1, 2, n, None, 1e-6).unwrap();
        let h1 = hs_norm(&result.function, 1.0);
        let h1_bound = c0 * n as f64 * tau - h1_0;
        assert!(
            h1 - h1_bound >= -(result.residual + slack),
            "linear n={n}: H¹ margin {:.3e} below -residual {:.3e}",
            h1 - h1_bound,
            result.residual
        );
        let energy = continuous_energy(&result.function, &model).unwrap();
        let energy_bound = 0.5 * (c0 * n as f64 * tau - c_prime).max(0.0).powi(2);
        assert!(
            energy - energy_bound >= -(result.residual + slack),
            "linear n={n}: energy margin {:.3e}",
            energy - energy_bound
        );
    }
    println!("criterion 9: linear fixture holds for n ≤ 64 (c0={c0:.4}, c'={c_prime:.4})");

    // Cubic: u⁰ = 1 + ½e^{-2ix}, σ = +1, τ = 2π/2.
    let u0 = FourierFunction::from_modes(&[(0, C64::new(1.0, 0.0)), (-2, C64::new(0.5, 0.0))]);
    let sigma = 1.0;
    let step = ResonantStep::new(1, 2, 1).unwrap();
    let c0 = product_l2_norm(&squared_modulus(&u0).derivative(), &u0);
    assert!((c0 - 2.5f64.sqrt()).abs() < 1e-12, "cubic c0 = {c0}");
    let h1_0 = hs_norm(&u0, 1.0);
    assert!((h1_0 - 1.5).abs() < 1e-12);
    // σ = +1 makes the quartic term nonnegative, so H ≥ ½‖∂u‖² and
    // c' = ‖u⁰‖_H¹ suffices.
    let c_prime = h1_0;
    let model = SemiDiscreteModel::Cubic { sigma };
    let energy_0 = continuous_energy(&u0, &model).unwrap();
    assert!((energy_0 - 65.0 / 64.0).abs() < 1e-12, "H(u⁰) = {energy_0}");
    for n in 0..=64u64 {
        let result = closed_form_cubic(&u0, sigma, &step, n, None, 1e-6).unwrap();
        let h1 = hs_norm(&result.function, 1.0);
        let h1_bound = c0 * n as f64 * step.tau() - h1_0;
        assert!(
            h1 - h1_bound >= -(result.residual + slack),
            "cubic n={n}: H¹ margin {:.3e} below -residual {:.3e}",
            h1 - h1_bound,
            result.residual
        );
        let energy = continuous_energy(&result.function, &model).unwrap();
        let energy_bound = 0.5 * (c0 * n as f64 * step.tau() - c_prime).max(0.0).powi(2);
        assert!(
            energy - energy_bound >= -(result.residual + slack),
            "cubic n={n}: energy margin {:.3e}",
            energy - energy_bound
        );
    }
    println!("criterion 9: cubic fixture holds for n ≤ 64 (c0={c0:.4}, c'={c_prime:.4})");
}

/// The recorded interpolation-ratio envelopes hold over fresh random
/// sweeps and are reproducible within ±10% across two independent seeds.
#[test]
fn criterion_10_interpolation_envelopes() {
    let sizes = [8usize, 32, 128, 512];
    let a = gn_envelope(&sizes, 1000, 11);
    let b = gn_envelope(&sizes, 1000, 12);
    for (seed, extremes) in [(11, &a), (12, &b)] {
        assert!(
            extremes.max_gn <= GN_RATIO_ENVELOPE,
            "seed {seed}: discrete ratio {:.4} above envelope {GN_RATIO_ENVELOPE}",
            extremes.max_gn
        );
        assert!(extremes.min_equiv >= EQUIV_LOWER - 1e-12);
        assert!(extremes.max_equiv <= EQUIV_UPPER + 1e-12);
    }
    let spread = (a.max_gn - b.max_gn).abs() / a.max_gn.max(b.max_gn);
    assert!(spread <= 0.10, "discrete envelope seed spread {:.1}%", 100.0 * spread);
    println!(
        "criterion 10: discrete max ratio {:.4}/{:.4} (seeds 11/12, spread {:.1}%) ≤ {GN_RATIO_ENVELOPE}",
        a.max_gn, b.max_gn, 100.0 * spread
    );

    let bandwidths = [2usize, 4, 8, 16, 24];
    let a = continuous_ratio_sweep(&bandwidths, 200, 11);
    let b = continuous_ratio_sweep(&bandwidths, 200, 12);
    for (seed, extremes) in [(11, &a), (12, &b)] {
        assert!(
            extremes.max_gn <= CONTINUOUS_GN_ENVELOPE,
            "seed {seed}: continuous ratio {:.4} above envelope",
            extremes.max_gn
        );
        assert!(
            extremes.max_linf <= CONTINUOUS_LINF_ENVELOPE,
            "seed {seed}: sup-norm ratio {:.4} above envelope",
            extremes.max_linf
        );
    }
    let gn_spread = (a.max_gn - b.max_gn).abs() / a.max_gn.max(b.max_gn);
    let linf_spread = (a.max_linf - b.max_linf).abs() / a.max_linf.max(b.max_linf);
    assert!(gn_spread <= 0.10, "continuous GN spread {:.1}%", 100.0 * gn_spread);
    assert!(linf_spread <= 0.10, "continuous sup spread {:.1}%", 100.0 * linf_spread);
    println!(
        "criterion 10: continuous ratios {:.4}/{:.4} and {:.4}/{:.4} within envelopes {CONTINUOUS_GN_ENVELOPE}/{CONTINUOUS_LINF_ENVELOPE}",
        a.max_gn, b.max_gn, a.max_linf, b.max_linf
    );
}

/// The discrete energy is itself exactly conserved when the step honors
/// the CFL constraint strongly (tiny τ, Strang): a cross-check that the
/// growth seen above is a resonance effect, not an integrator artifact.
#[test]
fn energy_growth_is_resonant_not_generic() {
    let grid = make_grid(64).unwrap();
    let model = ModelSpec::Cubic { sigma: 1.0 }.on_grid(&grid).unwrap();
    let u0 = state(&grid, &[(0, 1.0, 0.0), (16, 0.5, 0.0), (-16, 0.0, 0.25)]);
    let h0 = energy_hk(&grid, &u0, &model);
    let tau = 1e-4;
    let mut worst = 0.0f64;
    evolve(&grid, &u0, tau, 200, &model, Stepper::Strang, |_, u| {
        worst = worst.max((energy_hk(&grid, u, &model) - h0).abs());
    })
    .unwrap();
    assert!(
        worst <= 1e-4 * h0.abs(),
        "tiny-step Strang should hold H^K nearly constant, drifted {worst:.3e}"
    );
    println!("cross-check: tiny-step Strang energy drift {worst:.3e} (H0 = {h0:.6})");
}
