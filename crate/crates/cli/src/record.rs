// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! `record.json`: a versioned, self-describing result file.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub command: String,
    /// Full configuration after flag overrides; enough to re-run.
    pub config: RunConfig,
    pub outputs: Outputs,
    pub diagnostics: Diagnostics,
    /// Only present with `--timing`, so that plain runs are reproducible
    /// byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub max_trace_drift: Option<f64>,
    pub total_steps: usize,
    pub dt: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outputs {
    TruthTable { rows: Vec<TruthTableRow> },
    Sweep { rows: Vec<SweepRecordRow>, schedules: Vec<ScheduleRow> },
    Ghz(GhzOutputs),
    Validate { checks: Vec<CheckResult> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthTableRow {
    pub input_basis: String,
    pub after_step1: String,
    pub after_step2: String,
    pub after_step3: String,
    #[serde(rename = "matches_Up")]
    pub matches_up: bool,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecordRow {
    pub ratio: f64,
    pub fidelity: Option<f64>,
    pub t2_s: f64,
    pub trace_drift: Option<f64>,
    pub steps: usize,
    pub cavity_vacuum_overlap: Option<f64>,
    pub error: Option<String>,
}

/// Gate timing for `n` targets under the configured detuning policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub n_targets: usize,
    pub ratio: f64,
    pub t2_s: f64,
    pub tau_s: f64,
    pub sequential_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub basis: String,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzOutputs {
    pub ratio: f64,
    pub ideal_fidelity: f64,
    pub lossy_fidelity: f64,
    pub ideal_state: Vec<Amplitude>,
    /// Diagonal of the lossy output, entries above `1e-12`.
    pub lossy_populations: Vec<Population>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}
