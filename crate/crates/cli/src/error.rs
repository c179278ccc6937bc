use std::path::PathBuf;

use halstd_core::{Error as ModelError, ValidationErrors};

/// Everything that can stop a run, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or a missing argument for the chosen command.
    #[error("usage: {0}")]
    Usage(String),

    /// The scenario file parsed but broke one or more invariants.
    #[error("invalid scenario {}:\n{}", .path.display(), list_violations(.errors))]
    Invalid {
        path: PathBuf,
        errors: ValidationErrors,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", .path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("writing output: {0}")]
    Output(#[from] csv::Error),

    #[error(transparent)]
    Model(#[from] ModelError),

    /// At least one self-check missed its tolerance.
    #[error("{0} self-check(s) failed")]
    SelfCheck(usize),
}

fn list_violations(errors: &ValidationErrors) -> String {
    errors
        .violations()
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    /// 0 success, 1 validation or usage, 2 numeric, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid { .. } => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Output(_) => 3,
            CliError::SelfCheck(_) => 2,
            CliError::Model(e) => match e {
                ModelError::Validation(_)
                | ModelError::Domain { .. }
                | ModelError::Dimension { .. }
                | ModelError::InvalidArgument(_) => 1,
                ModelError::DegenerateShare { .. }
                | ModelError::Inconsistent { .. }
                | ModelError::NoConvergence { .. }
                | ModelError::BoundProximity { .. } => 2,
            },
        }
    }
}
