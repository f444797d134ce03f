//! Experiment configuration: a TOML file with `[model]`, `[run]` and
//! `[output]` tables, overridden field by field from the command line.

use std::path::PathBuf;

use fragsim_core::simulator::DEFAULT_FLOOR;
use fragsim_core::ModelParams;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brw,
    Gillespie,
    Spine,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Brw => "brw",
            Engine::Gillespie => "gillespie",
            Engine::Spine => "spine",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<bool>,
}

/// A possibly partial configuration, as read from a file or built from
/// flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Applies every field set in `flags` over `self`. Setting either
    /// horizon clears the other one so a flag can switch engines cleanly.
    pub fn override_with(&mut self, flags: &ConfigFile) {
        fn set<T: Clone>(dst: &mut Option<T>, src: &Option<T>) {
            if src.is_some() {
                dst.clone_from(src);
            }
        }
        set(&mut self.model.k, &flags.model.k);
        set(&mut self.model.alpha, &flags.model.alpha);
        set(&mut self.run.engine, &flags.run.engine);
        if flags.run.n_max.is_some() || flags.run.t_end.is_some() {
            self.run.n_max = flags.run.n_max;
            self.run.t_end = flags.run.t_end;
        }
        set(&mut self.run.replicas, &flags.run.replicas);
        set(&mut self.run.seed, &flags.run.seed);
        set(&mut self.run.floor, &flags.run.floor);
        set(&mut self.output.path, &flags.output.path);
        set(&mut self.output.points, &flags.output.points);
    }

    pub fn into_spec(self) -> Result<ExperimentSpec> {
        let spec = ExperimentSpec {
            k: self.model.k.ok_or(HarnessError::Missing("model.k"))?,
            alpha: self.model.alpha.ok_or(HarnessError::Missing("model.alpha"))?,
            engine: self.run.engine.ok_or(HarnessError::Missing("run.engine"))?,
            n_max: self.run.n_max,
            t_end: self.run.t_end,
            replicas: self.run.replicas.ok_or(HarnessError::Missing("run.replicas"))?,
            seed: self.run.seed.ok_or(HarnessError::Missing("run.seed"))?,
            floor: self.run.floor.unwrap_or(DEFAULT_FLOOR),
            out: self.output.path.ok_or(HarnessError::Missing("output.path"))?,
            points: self.output.points.unwrap_or(false),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A complete, validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub k: u32,
    pub alpha: f64,
    pub engine: Engine,
    pub n_max: Option<u32>,
    pub t_end: Option<f64>,
    pub replicas: u64,
    pub seed: u64,
    pub floor: f64,
    pub out: PathBuf,
    pub points: bool,
}

impl ExperimentSpec {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.k, self.alpha).map_err(|e| match e {
            fragsim_core::Error::Domain { what: "k", detail } => HarnessError::spec("model.k", detail),
            fragsim_core::Error::Domain { detail, .. } => HarnessError::spec("model.alpha", detail),
            other => other.into(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        match (self.engine, self.n_max, self.t_end) {
            (Engine::Brw | Engine::Spine, Some(_), None) => {}
            (Engine::Gillespie, None, Some(t)) => {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(HarnessError::spec("run.t_end", format!("must be finite and >= 0, got {t}")));
                }
            }
            (Engine::Gillespie, _, _) => {
                return Err(HarnessError::spec("run.t_end", "gillespie needs t_end and no n_max"));
            }
            (e, _, _) => {
                return Err(HarnessError::spec(
                    "run.n_max",
                    format!("{} needs n_max and no t_end", e.name()),
                ));
            }
        }
        if self.replicas == 0 {
            return Err(HarnessError::spec("run.replicas", "must be at least 1"));
        }
        if self.floor.is_nan() {
            return Err(HarnessError::spec("run.floor", "must not be NaN"));
        }
        if self.points && self.engine != Engine::Brw {
            return Err(HarnessError::spec("output.points", "point files exist only for brw"));
        }
        if self.out.as_os_str().is_empty() {
            return Err(HarnessError::spec("output.path", "must not be empty"));
        }
        Ok(())
    }

    pub fn to_config(&self) -> ConfigFile {
        ConfigFile {
            model: ModelSection {
                k: Some(self.k),
                alpha: Some(self.alpha),
            },
            run: RunSection {
                engine: Some(self.engine),
                n_max: self.n_max,
                t_end: self.t_end,
                replicas: Some(self.replicas),
                seed: Some(self.seed),
                floor: Some(self.floor),
            },
            output: OutputSection {
                path: Some(self.out.clone()),
                points: Some(self.points),
            },
        }
    }
}
