// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for `cqed-gate`: JSON configuration, the
//! `truth-table`, `sweep`, `ghz` and `validate` commands, and the
//! `results.csv` / `record.json` outputs.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod record;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use checks::Hooks;
pub use commands::{cmd_ghz, cmd_sweep, cmd_truth_table, cmd_validate, parallel_sweep, CommandOutput};
pub use config::{KScalingName, Overrides, RunConfig};
pub use error::{exit, CliError};
pub use record::{Outputs, ResultRecord};

pub const CSV_FILE: &str = "results.csv";
pub const RECORD_FILE: &str = "record.json";

#[derive(Debug, Parser)]
#[command(name = "cqed-gate", version, about = "Cavity-QED one-control n-target phase gate simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Step-by-step evolution of every logical basis state.
    TruthTable(CommonArgs),
    /// Lossy gate fidelity against the detuning ratio.
    Sweep(CommonArgs),
    /// GHZ preparation, ideal and lossy.
    Ghz(CommonArgs),
    /// Fast invariant suite.
    Validate(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON configuration file, or `-` for standard input.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for results.csv and record.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Number of target atoms.
    #[arg(long)]
    pub n: Option<usize>,
    /// Detuning ratio Δc/g for single-point commands.
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub ratio_min: Option<f64>,
    #[arg(long)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub ratio_steps: Option<usize>,
    /// Set every decay rate to zero.
    #[arg(long)]
    pub zero_dissipation: bool,
    #[arg(long, value_enum)]
    pub k_scaling: Option<KScalingName>,
    /// Record wall-clock time in record.json.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, hide = true)]
    pub test_flip_heff_sign: bool,
    #[arg(long, hide = true)]
    pub test_dt_scale: Option<f64>,
}

impl CommonArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            n_targets: self.n,
            ratio: self.ratio,
            ratio_min: self.ratio_min,
            ratio_max: self.ratio_max,
            ratio_steps: self.ratio_steps,
            zero_dissipation: self.zero_dissipation,
            k_scaling: self.k_scaling,
        }
    }

    pub fn hooks(&self) -> Hooks {
        Hooks {
            flip_heff_sign: self.test_flip_heff_sign,
            dt_scale: self.test_dt_scale.unwrap_or(1.0),
        }
    }

    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        c.apply(&self.overrides())?;
        Ok(c)
    }
}

pub fn write_outputs(dir: &Path, out: &CommandOutput) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(CSV_FILE), &out.csv)?;
    let mut json = serde_json::to_string_pretty(&out.record)?;
    json.push('\n');
    std::fs::write(dir.join(RECORD_FILE), json)?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<Option<CliError>, CliError> {
    let (name, args) = match &cli.command {
        Command::TruthTable(a) => ("truth-table", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Ghz(a) => ("ghz", a),
        Command::Validate(a) => ("validate", a),
    };
    let config = args.resolve_config()?;
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::TruthTable(_) => cmd_truth_table(&config)?,
        Command::Sweep(_) => cmd_sweep(&config)?,
        Command::Ghz(_) => cmd_ghz(&config)?,
        Command::Validate(a) => cmd_validate(&config, &a.hooks())?,
    };
    if args.timing {
        out.record.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    write_outputs(&args.out, &out)?;
    print!("{}", out.csv);
    log::info!("{name}: wrote {} and {}", CSV_FILE, RECORD_FILE);
    Ok(out.failure)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::VALIDATION } else { exit::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(None) => exit::SUCCESS,
        Ok(Some(failure)) | Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}
