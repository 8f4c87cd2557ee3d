// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! The four subcommands. Each returns its record and CSV body; writing
//! files is left to the caller.

use cqed_gate::protocol::{logical_labels, schedule_for_scaling, TRUTH_TABLE_MAX_N};
use cqed_gate::{
    gate_fidelity, ghz_prepare, ghz_prepare_lossy, ghz_state, ideal_reference_state, sweep_point, truth_table,
    DensityMatrix, EvolutionSettings, PureState, SpaceDescriptor, SweepResult, SweepSpec,
};
use rayon::prelude::*;

use crate::checks::{self, Hooks};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::record::{
    Amplitude, CheckResult, Diagnostics, GhzOutputs, Outputs, Population, ResultRecord, ScheduleRow,
    SweepRecordRow, TruthTableRow, SCHEMA_VERSION,
};

const PRINT_TOL: f64 = 1e-12;

/// Result of one command. `failure` is set when the run completed but a
/// check failed; the files are still worth writing.
#[derive(Debug)]
pub struct CommandOutput {
    pub record: ResultRecord,
    pub csv: String,
    pub failure: Option<CliError>,
}

/// `|c t1 t2 …;m>` with the cavity photon number after the semicolon.
pub fn ket(space: &SpaceDescriptor, index: usize) -> String {
    let labels = space.labels_of(index);
    let cav = space.cavity();
    let atoms: String = labels[..cav].iter().map(|l| l.to_string()).collect();
    format!("|{atoms};{}>", labels[cav])
}

/// Nonzero terms of `psi` as `(re+imi)|…>`, space separated.
pub fn format_state(space: &SpaceDescriptor, psi: &PureState) -> String {
    let terms: Vec<String> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > PRINT_TOL)
        .map(|(i, a)| {
            // drop roundoff in one component so that -1 prints as (-1+0i)
            let snap = |x: f64| if x.abs() > PRINT_TOL { x } else { 0.0 };
            format!("({}{:+}i){}", snap(a.re), snap(a.im), ket(space, i))
        })
        .collect();
    terms.join(" ")
}

fn record(command: &str, config: &RunConfig, outputs: Outputs, diagnostics: Diagnostics) -> ResultRecord {
    ResultRecord {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        config: config.clone(),
        outputs,
        diagnostics,
        wall_time_s: None,
    }
}

fn csv_string<F>(header: &[&str], fill: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    fill(&mut w)?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn cmd_truth_table(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let n = config.system.n_targets;
    if n > TRUTH_TABLE_MAX_N {
        return Err(CliError::Validation(format!(
            "truth table needs n <= {TRUTH_TABLE_MAX_N}, got {n}"
        )));
    }
    let space = config.gate_space()?;
    let table = truth_table(&config.params(), &space)?;
    let mut rows = Vec::with_capacity(table.len());
    for r in &table {
        let labels = logical_labels(&space, r.input)?;
        rows.push(TruthTableRow {
            input_basis: ket(&space, space.index_of(&labels)?),
            after_step1: format_state(&space, &r.trace.after_step1),
            after_step2: format_state(&space, &r.trace.after_step2),
            after_step3: format_state(&space, &r.trace.after_step3),
            matches_up: r.matches,
            max_error: r.max_error,
        });
    }
    let csv = csv_string(
        &["input_basis", "after_step1", "after_step2", "after_step3", "matches_Up"],
        |w| {
            for r in &rows {
                w.write_record([
                    r.input_basis.as_str(),
                    &r.after_step1,
                    &r.after_step2,
                    &r.after_step3,
                    if r.matches_up { "true" } else { "false" },
                ])?;
            }
            Ok(())
        },
    )?;
    let bad = rows.iter().filter(|r| !r.matches_up).count();
    let failure = (bad > 0).then(|| CliError::Physics(format!("{bad} truth-table rows differ from the ideal gate")));
    Ok(CommandOutput {
        record: record("truth-table", config, Outputs::TruthTable { rows }, Diagnostics::default()),
        csv,
        failure,
    })
}

/// [`cqed_gate::run_sweep`] with the points evaluated in parallel. Row
/// order follows `spec.ratios`.
pub fn parallel_sweep(spec: &SweepSpec, settings: &EvolutionSettings) -> cqed_gate::Result<SweepResult> {
    spec.validate()?;
    let reference = ideal_reference_state(&spec.space()?, &spec.initial_state_policy)?;
    let rows = spec
        .ratios
        .par_iter()
        .map(|&r| {
            let row = sweep_point(spec, r, &reference, settings);
            log::info!("ratio {r}: fidelity {:?}", row.fidelity);
            row
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        settings: *settings,
        rows,
    })
}

pub fn cmd_sweep(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let spec = config.sweep_spec();
    let settings = config.settings();
    let result = parallel_sweep(&spec, &settings)?;
    let finite = |x: f64| x.is_finite().then_some(x);
    let rows: Vec<SweepRecordRow> = result
        .rows
        .iter()
        .map(|r| SweepRecordRow {
            ratio: r.ratio,
            fidelity: r.fidelity,
            t2_s: r.t2_seconds,
            trace_drift: r.error.is_none().then_some(r.trace_drift).and_then(finite),
            steps: r.steps,
            cavity_vacuum_overlap: r.error.is_none().then_some(r.cavity_vacuum_overlap).and_then(finite),
            error: r.error.clone(),
        })
        .collect();

    let policy = config.sweep.k_scaling.into();
    let mut schedules = Vec::new();
    for n in 1..=config.system.n_targets {
        let ratio = cqed_gate::KScaling::ratio(policy, config.physics.ratio, n);
        let s = schedule_for_scaling(&config.params(), config.physics.ratio, n, policy)?;
        schedules.push(ScheduleRow {
            n_targets: n,
            ratio,
            t2_s: s.t2,
            tau_s: s.tau,
            sequential_s: s.sequential_time,
        });
    }

    let csv = csv_string(&["ratio", "fidelity", "t2_s", "trace_drift"], |w| {
        for r in &rows {
            w.write_record([r.ratio.to_string(), opt(r.fidelity), r.t2_s.to_string(), opt(r.trace_drift)])?;
        }
        Ok(())
    })?;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        log::error!("ratio {}: {}", r.ratio, r.error.as_deref().unwrap_or_default());
    }
    let ok: Vec<&SweepRecordRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let diagnostics = Diagnostics {
        max_trace_drift: ok.iter().filter_map(|r| r.trace_drift).reduce(f64::max),
        total_steps: ok.iter().map(|r| r.steps).sum(),
        dt: None,
    };
    let failure = ok.is_empty().then(|| {
        CliError::Integration(format!(
            "every sweep point failed; first error: {}",
            rows[0].error.as_deref().unwrap_or_default()
        ))
    });
    Ok(CommandOutput {
        record: record("sweep", config, Outputs::Sweep { rows, schedules }, diagnostics),
        csv,
        failure,
    })
}

pub fn cmd_ghz(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let space = config.gate_space()?;
    let params = config.params();
    let target = ghz_state(&space)?;
    let ideal = ghz_prepare(&params, &space)?;
    let ideal_fidelity = gate_fidelity(&DensityMatrix::from_pure(&ideal), &target)?;
    let lossy = ghz_prepare_lossy(&params, &space, &config.settings(), config.lossy_options())?;
    let rho = lossy.final_state.to_density();
    let lossy_fidelity = gate_fidelity(&rho, &target)?;
    let stats = lossy.integration.unwrap_or_default();

    let ideal_state = ideal
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > PRINT_TOL)
        .map(|(i, a)| Amplitude {
            basis: ket(&space, i),
            re: a.re,
            im: a.im,
        })
        .collect();
    let lossy_populations = (0..rho.dim())
        .map(|i| (i, rho.matrix()[(i, i)].re))
        .filter(|(_, p)| *p > PRINT_TOL)
        .map(|(i, p)| Population {
            basis: ket(&space, i),
            p,
        })
        .collect();
    let csv = csv_string(&["mode", "ghz_fidelity"], |w| {
        w.write_record(["ideal", &ideal_fidelity.to_string()])?;
        w.write_record(["lossy", &lossy_fidelity.to_string()])?;
        Ok(())
    })?;
    let failure = ((1.0 - ideal_fidelity).abs() > 1e-10)
        .then(|| CliError::Physics(format!("ideal GHZ fidelity is {ideal_fidelity}")));
    let outputs = Outputs::Ghz(GhzOutputs {
        ratio: config.physics.ratio,
        ideal_fidelity,
        lossy_fidelity,
        ideal_state,
        lossy_populations,
    });
    let diagnostics = Diagnostics {
        max_trace_drift: Some(stats.max_trace_drift),
        total_steps: stats.steps,
        dt: Some(stats.dt),
    };
    Ok(CommandOutput {
        record: record("ghz", config, outputs, diagnostics),
        csv,
        failure,
    })
}

pub fn cmd_validate(config: &RunConfig, hooks: &Hooks) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let checks: Vec<CheckResult> = checks::run_all(config, hooks)?;
    let csv = csv_string(&["check", "passed", "detail"], |w| {
        for c in &checks {
            w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, &c.detail])?;
        }
        Ok(())
    })?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| CliError::Physics(format!("failing invariants: {}", failed.join(", "))));
    Ok(CommandOutput {
        record: record("validate", config, Outputs::Validate { checks }, Diagnostics::default()),
        csv,
        failure,
    })
}
