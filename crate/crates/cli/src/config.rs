use std::path::Path;

use anyhow::{Context, Result};
use async_noma::fading::FadingConfig;
use async_noma::pulse::PulseSpec;
use async_noma::regions::Scenario;
use serde::Deserialize;

pub const SEED_ENV: &str = "ASYNC_NOMA_SEED";

/// Scenario file. Only `sigmas` and `total_power` are required.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub sigmas: Vec<f64>,
    pub total_power: f64,
    #[serde(default = "default_pulse")]
    pub pulse: PulseSpec,
    #[serde(default)]
    pub delays: Option<Vec<f64>>,
    #[serde(default = "default_block_length")]
    pub block_length: usize,
    #[serde(default)]
    pub resolution: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub fading: FadingSection,
    #[serde(default)]
    pub sumrate: SumrateSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FadingSection {
    pub realizations: usize,
    pub noise_variance: f64,
    pub channel_variance: f64,
    pub reassign_by_order: bool,
    pub resolution: usize,
}

impl Default for FadingSection {
    fn default() -> Self {
        let d = FadingConfig::default();
        Self {
            realizations: d.realizations,
            noise_variance: d.noise_variance,
            channel_variance: d.channel_variance,
            reassign_by_order: d.reassign_by_order,
            resolution: async_noma::fading::DEFAULT_RESOLUTION,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SumrateSection {
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
    /// Overrides the coefficient derived from the pulse and first two delays.
    pub g: Option<f64>,
}

impl Default for SumrateSection {
    fn default() -> Self {
        Self {
            p_min: 0.1,
            p_max: 100.0,
            points: 100,
            g: None,
        }
    }
}

fn default_pulse() -> PulseSpec {
    PulseSpec {
        kind: "rect".into(),
        symbol_interval: 1.0,
        beta: async_noma::pulse::DEFAULT_ROLLOFF,
        side_lobes: async_noma::pulse::DEFAULT_SIDE_LOBES,
    }
}

fn default_block_length() -> usize {
    16
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Delay slots: as given, or evenly spaced `k/K` of a symbol.
    pub fn delays(&self) -> Vec<f64> {
        self.delays.clone().unwrap_or_else(|| {
            let k = self.sigmas.len();
            (0..k)
                .map(|i| self.pulse.symbol_interval * i as f64 / k as f64)
                .collect()
        })
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let pulse = self.pulse.build()?;
        Ok(Scenario::new(
            &self.sigmas,
            self.total_power,
            &pulse,
            &self.delays(),
            self.block_length,
        )?)
    }

    pub fn fading_config(&self, seed: u64) -> FadingConfig {
        FadingConfig {
            realizations: self.fading.realizations,
            noise_variance: self.fading.noise_variance,
            channel_variance: self.fading.channel_variance,
            seed,
            reassign_by_order: self.fading.reassign_by_order,
        }
    }
}

/// The config seed unless the environment overrides it.
pub fn effective_seed(config_seed: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(std::env::VarError::NotPresent) => Ok(config_seed),
        Err(e) => Err(e).with_context(|| format!("cannot read {SEED_ENV}")),
    }
}
