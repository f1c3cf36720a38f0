//! Run manifests: every command writes a `manifest.json` beside its outputs
//! recording the tool version, input, output paths and the complete
//! configuration, so any artifact can be reproduced bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use vsa_segmentation::{Mode, PipelineConfig, Seeding};
use vsa_simplify::{SolverConfig, Strategy, Wtilde};

use crate::error::{CliError, CliResult};
use crate::ply::write_atomically;

/// Point-weight choice applied to the loaded cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WeightsSetting {
    /// Every point weighs 1.
    Unit,
    /// Squared-distance area weights from the k-nearest graph.
    Area,
}

/// Serializable mirror of [`Mode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeSetting {
    Classic,
    Switch,
}

impl From<Mode> for ModeSetting {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Classic => ModeSetting::Classic,
            Mode::Switch => ModeSetting::Switch,
        }
    }
}

impl From<ModeSetting> for Mode {
    fn from(mode: ModeSetting) -> Self {
        match mode {
            ModeSetting::Classic => Mode::Classic,
            ModeSetting::Switch => Mode::Switch,
        }
    }
}

/// Serializable mirror of [`Strategy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StrategySetting {
    Intersect,
    Optimize,
}

impl From<Strategy> for StrategySetting {
    fn from(strategy: Strategy) -> Self {
        match strategy {
            Strategy::Intersect => StrategySetting::Intersect,
            Strategy::Optimize => StrategySetting::Optimize,
        }
    }
}

impl From<StrategySetting> for Strategy {
    fn from(strategy: StrategySetting) -> Self {
        match strategy {
            StrategySetting::Intersect => Strategy::Intersect,
            StrategySetting::Optimize => Strategy::Optimize,
        }
    }
}

/// Serializable mirror of [`Seeding`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedingSettings {
    Explicit { indices: Vec<usize> },
    Count { count: usize },
    AllPoints,
}

impl From<&Seeding> for SeedingSettings {
    fn from(seeding: &Seeding) -> Self {
        match seeding {
            Seeding::Explicit(indices) => SeedingSettings::Explicit {
                indices: indices.clone(),
            },
            Seeding::Count(count) => SeedingSettings::Count { count: *count },
            Seeding::AllPoints => SeedingSettings::AllPoints,
        }
    }
}

impl From<&SeedingSettings> for Seeding {
    fn from(settings: &SeedingSettings) -> Self {
        match settings {
            SeedingSettings::Explicit { indices } => Seeding::Explicit(indices.clone()),
            SeedingSettings::Count { count } => Seeding::Count(*count),
            SeedingSettings::AllPoints => Seeding::AllPoints,
        }
    }
}

/// Serializable mirror of [`PipelineConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSettings {
    pub mode: ModeSetting,
    pub eta: f64,
    pub k: usize,
    pub seeding: SeedingSettings,
    pub enable_split: bool,
    pub enable_merge: bool,
    pub max_iterations: usize,
    pub rng_seed: u64,
}

impl From<&PipelineConfig> for PipelineSettings {
    fn from(config: &PipelineConfig) -> Self {
        PipelineSettings {
            mode: config.mode.into(),
            eta: config.eta,
            k: config.k,
            seeding: (&config.seeding).into(),
            enable_split: config.enable_split,
            enable_merge: config.enable_merge,
            max_iterations: config.max_iterations,
            rng_seed: config.rng_seed,
        }
    }
}

impl PipelineSettings {
    pub fn to_config(&self) -> PipelineConfig {
        PipelineConfig {
            mode: self.mode.into(),
            eta: self.eta,
            k: self.k,
            seeding: (&self.seeding).into(),
            enable_split: self.enable_split,
            enable_merge: self.enable_merge,
            max_iterations: self.max_iterations,
            rng_seed: self.rng_seed,
        }
    }
}

/// Serializable mirror of [`Wtilde`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WtildeSettings {
    Uniform { value: f64 },
    PerProxy { values: Vec<f64> },
}

impl From<&Wtilde> for WtildeSettings {
    fn from(wtilde: &Wtilde) -> Self {
        match wtilde {
            Wtilde::Uniform(value) => WtildeSettings::Uniform { value: *value },
            Wtilde::PerProxy(values) => WtildeSettings::PerProxy {
                values: values.clone(),
            },
        }
    }
}

impl From<&WtildeSettings> for Wtilde {
    fn from(settings: &WtildeSettings) -> Self {
        match settings {
            WtildeSettings::Uniform { value } => Wtilde::Uniform(*value),
            WtildeSettings::PerProxy { values } => Wtilde::PerProxy(values.clone()),
        }
    }
}

/// Serializable mirror of [`SolverConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub wtilde: WtildeSettings,
    pub max_outer: usize,
    pub constraint_tol: f64,
    pub step_tol: f64,
}

impl From<&SolverConfig> for SolverSettings {
    fn from(config: &SolverConfig) -> Self {
        SolverSettings {
            wtilde: (&config.wtilde).into(),
            max_outer: config.max_outer,
            constraint_tol: config.constraint_tol,
            step_tol: config.step_tol,
        }
    }
}

impl SolverSettings {
    pub fn to_config(&self) -> SolverConfig {
        SolverConfig {
            wtilde: (&self.wtilde).into(),
            max_outer: self.max_outer,
            constraint_tol: self.constraint_tol,
            step_tol: self.step_tol,
        }
    }
}

/// Everything needed to reproduce one CLI run, written beside its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub input: String,
    /// Label CSV consumed by mesh extraction; absent on segmentation runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<String>,
    pub outputs: Vec<String>,
    pub weights: WeightsSetting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySetting>,
    pub rng_seed: u64,
}

impl RunManifest {
    pub fn tool_version() -> String {
        env!("CARGO_PKG_VERSION").to_string()
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let json = serde_json::to_string_pretty(self)?;
        write_atomically(path, json.as_bytes())
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn segment_manifest_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let config = PipelineConfig {
            eta: 25.0,
            seeding: Seeding::Explicit(vec![3, 1, 4]),
            ..PipelineConfig::default()
        };
        let manifest = RunManifest {
            tool_version: RunManifest::tool_version(),
            input: "cloud.ply".into(),
            labels: None,
            outputs: vec!["labels.csv".into(), "proxies.json".into()],
            weights: WeightsSetting::Area,
            pipeline: Some((&config).into()),
            solver: None,
            strategy: None,
            rng_seed: config.rng_seed,
        };
        manifest.save(&path).unwrap();
        let reloaded = RunManifest::load(&path).unwrap();
        assert_eq!(reloaded, manifest);
        assert_eq!(reloaded.pipeline.unwrap().to_config(), config);
    }

    #[test]
    fn simplify_manifest_round_trips() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let config = SolverConfig {
            wtilde: Wtilde::Uniform(1e9),
            ..SolverConfig::default()
        };
        let manifest = RunManifest {
            tool_version: RunManifest::tool_version(),
            input: "cloud.ply".into(),
            labels: Some("labels.csv".into()),
            outputs: vec!["mesh.obj".into()],
            weights: WeightsSetting::Unit,
            pipeline: None,
            solver: Some((&config).into()),
            strategy: Some(Strategy::Optimize.into()),
            rng_seed: 0,
        };
        manifest.save(&path).unwrap();
        let reloaded = RunManifest::load(&path).unwrap();
        assert_eq!(reloaded, manifest);
        assert_eq!(reloaded.solver.unwrap().to_config(), config);
        assert_eq!(Strategy::from(reloaded.strategy.unwrap()), Strategy::Optimize);
    }

    #[test]
    fn seeding_forms_serialize_distinctly() {
        let all = serde_json::to_string(&SeedingSettings::AllPoints).unwrap();
        let count = serde_json::to_string(&SeedingSettings::Count { count: 6 }).unwrap();
        let explicit =
            serde_json::to_string(&SeedingSettings::Explicit { indices: vec![7] }).unwrap();
        assert_eq!(all, r#"{"kind":"all_points"}"#);
        assert_eq!(count, r#"{"kind":"count","count":6}"#);
        assert_eq!(explicit, r#"{"kind":"explicit","indices":[7]}"#);
    }

    #[test]
    fn segment_manifest_omits_solver_keys() {
        let manifest = RunManifest {
            tool_version: "0.0.0".into(),
            input: "in.ply".into(),
            labels: None,
            outputs: vec![],
            weights: WeightsSetting::Unit,
            pipeline: Some((&PipelineConfig::default()).into()),
            solver: None,
            strategy: None,
            rng_seed: 0,
        };
        let json = serde_json::to_string(&manifest).unwrap();
        assert!(!json.contains("solver"), "{json}");
        assert!(!json.contains("strategy"), "{json}");
        assert!(json.contains(r#""mode":"switch""#), "{json}");
    }
}
