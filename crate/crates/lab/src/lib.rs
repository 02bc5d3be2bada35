//! Scenario-driven experiments over the `lclab-core` engine.
//!
//! A [`Scenario`] is loaded and validated from TOML, a [`Command`] runs it,
//! and the result is a [`Report`] with per-check verdicts and data tables.

pub mod commands;
pub mod report;
pub mod scenario;

pub use commands::{run, Command};
pub use report::{Check, Report, Table};
pub use scenario::{Overrides, Scenario, ScenarioError};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] lclab_core::Error),
}

impl LabError {
    /// 3 for invalid input, 2 for anything the engine could not decide.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Scenario(_) | LabError::Invalid(_) => 3,
            LabError::Core(_) => 2,
        }
    }
}
