// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Exit codes of the command-line tool.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 2;
    pub const PHYSICS: i32 = 3;
    pub const INTEGRATION: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("physics check failed: {0}")]
    Physics(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Physics(_) => exit::PHYSICS,
            CliError::Integration(_) | CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => {
                exit::INTEGRATION
            }
        }
    }
}

impl From<cqed_gate::Error> for CliError {
    fn from(e: cqed_gate::Error) -> Self {
        use cqed_gate::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidConfig(_)
            | E::InvalidParams(_)
            | E::LabelOutOfRange { .. }
            | E::LabelCount { .. }
            | E::NoSuchSubsystem(_)
            | E::MissingSubsystem(_)
            | E::EmptyKeepSet
            | E::NonVacuumCavity(_) => CliError::Validation(msg),
            E::StepBudgetExceeded { .. } => CliError::Integration(msg),
            _ => CliError::Physics(msg),
        }
    }
}
