//! Experiment harness for `hfree-core`: graph and order files, serializable
//! experiment configs, parallel Monte-Carlo batches with CSV output,
//! query-scaling runs and instrumented checks of the discovery guarantees.

pub mod experiment;
pub mod format;
pub mod lemmas;
pub mod manifest;
pub mod report;
pub mod scaling;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("fixture hypothesis does not hold: {0}")]
    Hypothesis(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl HarnessError {
    /// Process exit code: 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Hypothesis(_) => 2,
            HarnessError::Io(_) | HarnessError::Invariant(_) => 1,
        }
    }
}
