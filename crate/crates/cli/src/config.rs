// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: one JSON document, every field optional.

use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use cqed_gate::hamiltonians::{DEFAULT_G, DEFAULT_LIFETIME_S, DEFAULT_OMEGA_21};
use cqed_gate::{EvolutionSettings, InitialStatePolicy, KScaling, LossyOptions, Method, PhysicalParams, SweepSpec};
use cqed_gate::{SpaceDescriptor, SystemConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum KScalingName {
    Fixed,
    #[default]
    SqrtN,
}

impl From<KScalingName> for KScaling {
    fn from(k: KScalingName) -> Self {
        match k {
            KScalingName::Fixed => KScaling::Fixed,
            KScalingName::SqrtN => KScaling::SqrtN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSection {
    pub n_targets: usize,
    pub fock_cutoff: usize,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            n_targets: 4,
            fock_cutoff: 1,
        }
    }
}

/// Couplings and rates in rad/s and 1/s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsSection {
    pub g: f64,
    pub g_r: f64,
    /// `Δc / g` used by `truth-table`, `ghz` and `validate`.
    pub ratio: f64,
    pub kappa: f64,
    pub gamma_21: f64,
    pub gamma_20: f64,
    pub gamma_10: f64,
    pub omega_21: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        let rate = 1.0 / DEFAULT_LIFETIME_S;
        Self {
            g: DEFAULT_G,
            g_r: DEFAULT_G,
            ratio: 10.0,
            kappa: rate,
            gamma_21: rate,
            gamma_20: rate,
            gamma_10: rate,
            omega_21: DEFAULT_OMEGA_21,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionSection {
    pub dt_max: f64,
    pub steps_per_fastest_period: u32,
    pub max_steps: usize,
    pub decay_during_resonant_steps: bool,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        let s = EvolutionSettings::default();
        Self {
            dt_max: s.dt_max,
            steps_per_fastest_period: s.steps_per_fastest_period,
            max_steps: s.max_steps,
            decay_during_resonant_steps: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub ratios: Vec<f64>,
    pub k_scaling: KScalingName,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            ratios: vec![2.0, 5.0, 10.0, 20.0, 40.0],
            k_scaling: KScalingName::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub system: SystemSection,
    pub physics: PhysicsSection,
    pub evolution: EvolutionSection,
    pub sweep: SweepSection,
}

/// Command-line values that replace fields of a loaded [`RunConfig`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n_targets: Option<usize>,
    pub ratio: Option<f64>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub ratio_steps: Option<usize>,
    pub zero_dissipation: bool,
    pub k_scaling: Option<KScalingName>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    /// Reads a file, or standard input when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?
        };
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(n) = o.n_targets {
            self.system.n_targets = n;
        }
        if let Some(r) = o.ratio {
            self.physics.ratio = r;
        }
        if o.ratio_min.is_some() || o.ratio_max.is_some() || o.ratio_steps.is_some() {
            let old = &self.sweep.ratios;
            let lo = o.ratio_min.or(old.first().copied()).unwrap_or(2.0);
            let hi = o.ratio_max.or(old.last().copied()).unwrap_or(lo);
            let steps = o.ratio_steps.unwrap_or(old.len().max(2));
            self.sweep.ratios = linspace(lo, hi, steps)?;
        }
        if o.zero_dissipation {
            let p = &mut self.physics;
            p.kappa = 0.0;
            p.gamma_21 = 0.0;
            p.gamma_20 = 0.0;
            p.gamma_10 = 0.0;
        }
        if let Some(k) = o.k_scaling {
            self.sweep.k_scaling = k;
        }
        Ok(())
    }

    /// Parameters at `Δc = ratio · g`.
    pub fn params_at(&self, ratio: f64) -> PhysicalParams {
        let p = &self.physics;
        let delta_c = ratio * p.g;
        PhysicalParams {
            g_r: p.g_r,
            g: p.g,
            delta_c,
            kappa: p.kappa,
            gamma_21: p.gamma_21,
            gamma_20: p.gamma_20,
            gamma_10: p.gamma_10,
            omega_c: p.omega_21 - delta_c,
            omega_21: p.omega_21,
        }
    }

    pub fn params(&self) -> PhysicalParams {
        self.params_at(self.physics.ratio)
    }

    pub fn settings(&self) -> EvolutionSettings {
        let e = &self.evolution;
        EvolutionSettings {
            dt_max: e.dt_max,
            steps_per_fastest_period: e.steps_per_fastest_period,
            method: Method::Rk4Fixed,
            max_steps: e.max_steps,
        }
    }

    pub fn lossy_options(&self) -> LossyOptions {
        LossyOptions {
            decay_during_resonant_steps: self.evolution.decay_during_resonant_steps,
        }
    }

    pub fn gate_space(&self) -> Result<SpaceDescriptor, CliError> {
        Ok(SpaceDescriptor::new(SystemConfig::new(
            self.system.n_targets,
            self.system.fock_cutoff,
            true,
        ))?)
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            ratios: self.sweep.ratios.clone(),
            params_base: self.params(),
            initial_state_policy: InitialStatePolicy::PlusStates,
            n_targets: self.system.n_targets,
            fock_cutoff: self.system.fock_cutoff,
            options: self.lossy_options(),
        }
    }

    /// Checks everything a command might touch before it runs.
    pub fn validate(&self) -> Result<(), CliError> {
        SystemConfig::new(self.system.n_targets, self.system.fock_cutoff, true).validate()?;
        let p = &self.physics;
        if !positive_finite(p.ratio) {
            return Err(CliError::Validation(format!("ratio must be positive, got {}", p.ratio)));
        }
        for w in self.params().validate(self.system.n_targets)? {
            log::warn!("{w:?}");
        }
        let e = &self.evolution;
        if !positive_finite(e.dt_max) {
            return Err(CliError::Validation(format!("dt_max must be positive, got {}", e.dt_max)));
        }
        if e.steps_per_fastest_period == 0 || e.max_steps == 0 {
            return Err(CliError::Validation(
                "steps_per_fastest_period and max_steps must be positive".into(),
            ));
        }
        self.sweep_spec().validate()?;
        Ok(())
    }
}

pub(crate) fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    match steps {
        0 => Err(CliError::Validation("ratio-steps must be at least 1".into())),
        1 => Ok(vec![lo]),
        _ => {
            let h = (hi - lo) / (steps - 1) as f64;
            Ok((0..steps)
                .map(|i| if i == steps - 1 { hi } else { lo + h * i as f64 })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
        assert_eq!(RunConfig::from_json("{}").unwrap(), c);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"system": {"n": 3}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"extra": 1}"#).is_err());
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut c = RunConfig::from_json(r#"{"system": {"n_targets": 3}, "physics": {"ratio": 7.0}}"#).unwrap();
        c.apply(&Overrides {
            n_targets: Some(2),
            ratio_min: Some(5.0),
            ratio_max: Some(15.0),
            ratio_steps: Some(3),
            zero_dissipation: true,
            ..Overrides::default()
        })
        .unwrap();
        assert_eq!(c.system.n_targets, 2);
        assert_eq!(c.physics.ratio, 7.0);
        assert_eq!(c.sweep.ratios, [5.0, 10.0, 15.0]);
        assert_eq!(c.params().kappa, 0.0);
    }

    #[test]
    fn validation() {
        RunConfig::default().validate().unwrap();
        let mut c = RunConfig::default();
        c.physics.g_r = 0.0;
        assert!(matches!(c.validate(), Err(CliError::Validation(_))));
        let mut c = RunConfig::default();
        c.sweep.ratios.clear();
        assert!(matches!(c.validate(), Err(CliError::Validation(_))));
        assert!(linspace(1.0, 2.0, 0).is_err());
    }
}
