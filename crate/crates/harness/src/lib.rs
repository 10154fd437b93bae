//! Experiment harness around the `splitstep` core: TOML-configured runs,
//! CSV/JSON artifacts, a graded verification suite, and parameter sweeps.
//! The `splitstep` binary in this crate is a thin CLI over these modules.

pub mod config;
pub mod emit;
pub mod experiment;
pub mod report;
pub mod sweep;

/// Anything that can go wrong between a config file and its artifacts.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// A config field failed validation; the message names the field.
    #[error("config error: {0}")]
    Config(String),
    /// An artifact file did not have the expected shape.
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] splitstep::error::CoreError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
