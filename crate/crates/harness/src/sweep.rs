//! Parameter sweeps: a list of experiment configs run as one batch,
//! in parallel when the `parallel` feature is on.  Results come back in
//! config order regardless of scheduling, and all file writes happen
//! sequentially afterwards, so sweep artifacts are deterministic too.

use std::path::Path;

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::emit::{emit_csv, emit_json};
use crate::experiment::{run_experiment, ExperimentSummary, StepClassification, TrajectoryRecord};
use crate::HarnessError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub name: String,
    pub cases: Vec<ExperimentConfig>,
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let sweep: Self = toml::from_str(text)?;
        sweep.validate()?;
        Ok(sweep)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.cases.is_empty() {
            return Err(HarnessError::Config("cases: sweep has none".into()));
        }
        for case in &self.cases {
            case.validate()
                .map_err(|e| HarnessError::Config(format!("case {:?}: {e}", case.name)))?;
        }
        let mut names: Vec<&str> = self.cases.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(HarnessError::Config(format!(
                    "cases: duplicate name {:?} would overwrite its own artifacts",
                    pair[0]
                )));
            }
        }
        Ok(())
    }
}

/// One finished case, in memory.
pub struct CaseResult {
    pub records: Vec<TrajectoryRecord>,
    pub summary: ExperimentSummary,
}

/// Index row recorded per case in `<sweep>.index.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseDigest {
    pub name: String,
    pub tau: f64,
    pub cfl_number: f64,
    pub classification: StepClassification,
    pub horizon_steps: Option<u64>,
    pub rows: usize,
    pub final_h1: f64,
    pub drift_slope: Option<f64>,
    pub csv: String,
    pub json: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepIndex {
    pub name: String,
    pub cases: Vec<CaseDigest>,
}

/// Run every case.  Results are ordered like `sweep.cases` whatever the
/// worker scheduling was.
pub fn run_sweep(sweep: &SweepConfig) -> Result<Vec<CaseResult>, HarnessError> {
    sweep.validate()?;
    let run_one = |config: &ExperimentConfig| -> Result<CaseResult, HarnessError> {
        let (records, summary) = run_experiment(config)?;
        Ok(CaseResult { records, summary })
    };
    #[cfg(feature = "parallel")]
    let results: Result<Vec<CaseResult>, HarnessError> =
        sweep.cases.par_iter().map(run_one).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<CaseResult>, HarnessError> = sweep.cases.iter().map(run_one).collect();
    results
}

/// Run the sweep and write one CSV + JSON per case plus the index file,
/// all into `out_dir`.  Returns the index.
pub fn write_sweep(sweep: &SweepConfig, out_dir: &Path) -> Result<SweepIndex, HarnessError> {
    let results = run_sweep(sweep)?;
    std::fs::create_dir_all(out_dir)?;
    let mut digests = Vec::with_capacity(results.len());
    for (case, result) in sweep.cases.iter().zip(&results) {
        let (csv_name, json_name) = case.artifact_names();
        emit_csv(&result.records, &out_dir.join(&csv_name))?;
        emit_json(&result.summary, &out_dir.join(&json_name))?;
        digests.push(CaseDigest {
            name: case.name.clone(),
            tau: result.summary.tau,
            cfl_number: result.summary.cfl_number,
            classification: result.summary.classification,
            horizon_steps: result.summary.constants.horizon_steps,
            rows: result.records.len(),
            final_h1: result.records.last().map(|r| r.h1).unwrap_or(0.0),
            drift_slope: result.summary.drift_fit.map(|f| f.slope),
            csv: csv_name,
            json: json_name,
        });
    }
    let index = SweepIndex {
        name: sweep.name.clone(),
        cases: digests,
    };
    let index_path = out_dir.join(format!("{}.index.json", sweep.name));
    let file = std::fs::File::create(index_path)?;
    serde_json::to_writer_pretty(&file, &index)?;
    use std::io::Write;
    writeln!(&file)?;
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_text() -> String {
        let case = |q: u64| {
            format!(
                r#"
[[cases]]
name = "q{q}"
equation = "cubic"
sigma = 1.0
k = {k}
n_steps = 8

[cases.initial]
kind = "fourier"
modes = [{{ mode = 0, re = 1.0 }}, {{ mode = -{q}, re = 0.1 }}]

[cases.step]
p = 1
q = {q}
power = 2
"#,
                k = 2 * q
            )
        };
        format!("name = \"family\"\n{}{}{}", case(4), case(8), case(16))
    }

    #[test]
    fn sweeps_parse_run_and_keep_case_order() {
        let sweep = SweepConfig::from_toml_str(&sweep_text()).unwrap();
        let results = run_sweep(&sweep).unwrap();
        assert_eq!(results.len(), 3);
        for (case, result) in sweep.cases.iter().zip(&results) {
            assert_eq!(result.summary.config.name, case.name);
            assert_eq!(result.records.len(), 9);
            // The whole family sits at the same CFL number.
            assert!((result.summary.cfl_number - 8.0 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicate_case_names_are_rejected() {
        let text = sweep_text().replace("name = \"q8\"", "name = \"q4\"");
        let err = SweepConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn sweep_artifacts_are_deterministic() {
        let sweep = SweepConfig::from_toml_str(&sweep_text()).unwrap();
        let dir_a = std::env::temp_dir().join("splitstep-sweep-a");
        let dir_b = std::env::temp_dir().join("splitstep-sweep-b");
        write_sweep(&sweep, &dir_a).unwrap();
        write_sweep(&sweep, &dir_b).unwrap();
        for name in ["q4.csv", "q8.csv", "q16.csv", "family.index.json"] {
            let a = std::fs::read(dir_a.join(name)).unwrap();
            let b = std::fs::read(dir_b.join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between runs");
        }
        std::fs::remove_dir_all(&dir_a).ok();
        std::fs::remove_dir_all(&dir_b).ok();
    }
}
