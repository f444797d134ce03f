//! JSON metadata written next to every CSV output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentSpec;
use crate::error::{HarnessError, Result};
use crate::records::SCHEMA_VERSION;

/// Output of `git describe` at build time, or `unknown`.
pub const GIT_DESCRIBE: &str = env!("FRAGSIM_GIT_DESCRIBE");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailsSpec {
    pub q: f64,
    pub n: u32,
    pub t_grid: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunDescription {
    Simulate { spec: ExperimentSpec },
    Tails { spec: TailsSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub schema_version: u32,
    pub run: RunDescription,
    pub seed: Option<u64>,
    pub git_describe: String,
    pub version: String,
    pub wall_clock_seconds: f64,
    pub rows: u64,
}

impl Sidecar {
    pub fn new(run: RunDescription, wall_clock_seconds: f64, rows: u64) -> Self {
        let seed = match &run {
            RunDescription::Simulate { spec } => Some(spec.seed),
            RunDescription::Tails { .. } => None,
        };
        Sidecar {
            schema_version: SCHEMA_VERSION,
            run,
            seed,
            git_describe: GIT_DESCRIBE.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds,
            rows,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let s: Sidecar = serde_json::from_str(text)?;
        if s.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Record(format!(
                "sidecar schema_version {} is not supported (expected {SCHEMA_VERSION})",
                s.schema_version
            )));
        }
        Ok(s)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn path_for(csv: &Path) -> PathBuf {
        csv.with_extension("json")
    }

    pub fn write_for(&self, csv: &Path) -> Result<PathBuf> {
        let path = Self::path_for(csv);
        let mut text = self.to_json_string()?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }

    pub fn read_for(csv: &Path) -> Result<Self> {
        let path = Self::path_for(csv);
        let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
        Self::from_json_str(&text)
    }

    pub fn simulate_spec(&self) -> Option<&ExperimentSpec> {
        match &self.run {
            RunDescription::Simulate { spec } => Some(spec),
            RunDescription::Tails { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Engine;

    #[test]
    fn round_trip() {
        let spec = ExperimentSpec {
            k: 2,
            alpha: 1.0,
            engine: Engine::Spine,
            n_max: Some(4),
            t_end: None,
            replicas: 3,
            seed: 9,
            floor: -5.0,
            out: "x.csv".into(),
            points: false,
        };
        let s = Sidecar::new(RunDescription::Simulate { spec }, 0.25, 15);
        assert_eq!(s.seed, Some(9));
        let back = Sidecar::from_json_str(&s.to_json_string().unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(!back.git_describe.is_empty());
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        let s = Sidecar::new(
            RunDescription::Tails { spec: TailsSpec { q: 0.5, n: 2, t_grid: "0:1:1".into() } },
            0.0,
            2,
        );
        let text = s.to_json_string().unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(Sidecar::from_json_str(&text).is_err());
        assert!(Sidecar::from_json_str("{}").is_err());
        assert!(Sidecar::from_json_str("not json").is_err());
    }
}
