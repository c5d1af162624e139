//! Run configuration: a single JSON document driving every command.
//!
//! A run is reproducible bit-for-bit from its configuration and the crate
//! version; reports embed a hash of the canonical serialization.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::EnumBudget;
use crate::series::ContinuationConfig;
use crate::surfaces::SurfaceSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Convention flag for the orientation of the orthogeodesic family.
///
/// Under the oriented convention (the default, calibrated on the symmetric
/// pants) an orthogeodesic and its reversal are distinct records, and the
/// Basmajian and Bridgeman identities hold with each record contributing
/// once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrientationConvention {
    #[default]
    Oriented,
    Unoriented,
}

/// Normalization flag for the Rogers dilogarithm in the Bridgeman
/// identity. The `pi2-over-6` normalization (`R(1) = π²/6`) was calibrated
/// once against the symmetric pants and frozen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DilogNormalization {
    #[default]
    Pi2Over6,
    HalfPi2Over6,
    DoublePi2Over6,
}

impl DilogNormalization {
    /// Multiplier applied to each Rogers-dilogarithm summand.
    pub fn factor(&self) -> f64 {
        match self {
            DilogNormalization::Pi2Over6 => 1.0,
            DilogNormalization::HalfPi2Over6 => 0.5,
            DilogNormalization::DoublePi2Over6 => 2.0,
        }
    }
}

fn default_cutoff() -> f64 {
    14.0
}

fn default_budget() -> u64 {
    crate::enumerate::DEFAULT_BUDGET
}

/// Full description of a run. Every command consumes one of these;
/// unknown fields are rejected so a typo cannot silently change a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceSpec,
    /// Length cutoff for enumerations.
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    /// Node-expansion budget for enumerations.
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Basepoints for arc commands, in upper half-plane coordinates; when
    /// absent they are sampled deterministically from the seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoints: Option<Vec<[f64; 2]>>,
    /// Continuation sweep parameters.
    #[serde(default)]
    pub continuation: ContinuationConfig,
    /// Seed for deterministic sampling (basepoints, fit jitter).
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub orientation: OrientationConvention,
    #[serde(default)]
    pub dilog_normalization: DilogNormalization,
}

impl RunConfig {
    pub fn pants(l1: f64, l2: f64, l3: f64) -> RunConfig {
        RunConfig {
            surface: SurfaceSpec::pants(l1, l2, l3),
            cutoff: default_cutoff(),
            budget: default_budget(),
            basepoints: None,
            continuation: ContinuationConfig::default(),
            seed: 0,
            orientation: OrientationConvention::default(),
            dilog_normalization: DilogNormalization::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "cutoff must be positive, got {}",
                self.cutoff
            )));
        }
        if self.cutoff > crate::enumerate::MAX_CUTOFF {
            return Err(ConfigError::Invalid(format!(
                "cutoff {} exceeds the supported maximum {}",
                self.cutoff,
                crate::enumerate::MAX_CUTOFF
            )));
        }
        for &l in &self.surface.boundary_lengths {
            if !(l.is_finite() && l > 0.0 && l <= crate::surfaces::MAX_BOUNDARY_LENGTH) {
                return Err(ConfigError::Invalid(format!(
                    "boundary length {l} out of range (0, {}]",
                    crate::surfaces::MAX_BOUNDARY_LENGTH
                )));
            }
        }
        if self.budget == 0 {
            return Err(ConfigError::Invalid("budget must be positive".into()));
        }
        Ok(())
    }

    pub fn enum_budget(&self) -> EnumBudget {
        EnumBudget {
            max_expansions: self.budget,
        }
    }

    /// FNV-1a hash of the canonical JSON serialization, hex encoded.
    /// Stable across runs for identical configurations.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.as_bytes() {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Crate version stamped into every report.
pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
