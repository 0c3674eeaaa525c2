//! Experiment configuration: TOML files, CLI overrides and their resolution.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::presets::preset;
use crate::error::{Error, Result};
use crate::geometry::{ModelSpace, SpaceKind};
use crate::walker::{Isometry, WalkConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format {other:?} (csv or json)"))),
        }
    }
}

/// An explicit measure, as an alternative to a preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    /// `tree`, `hyperbolic`, `euclidean` or `tree-line`.
    pub space: String,
    pub valence: Option<u8>,
    pub generators: Vec<String>,
    /// Omitted: uniform on the generators and their inverses.
    pub weights: Option<Vec<f64>>,
}

impl WalkSpec {
    pub fn space(&self) -> Result<ModelSpace> {
        let valence = self.valence.unwrap_or(4);
        if valence < 3 {
            return Err(Error::Config(format!("valence must be at least 3, got {valence}")));
        }
        Ok(match self.space.as_str() {
            "tree" => ModelSpace::tree(valence),
            "hyperbolic" => ModelSpace::hyperbolic(),
            "euclidean" => ModelSpace::euclidean(),
            "tree-line" => ModelSpace::tree_times_line(valence),
            other => {
                return Err(Error::Config(format!(
                    "unknown space {other:?} (tree, hyperbolic, euclidean, tree-line)"
                )))
            }
        })
    }

    pub fn build(&self) -> Result<WalkConfig> {
        let space = self.space()?;
        let gens: Vec<Isometry> = self
            .generators
            .iter()
            .map(|s| Isometry::parse(space.kind, s))
            .collect::<Result<_>>()?;
        match &self.weights {
            None => WalkConfig::symmetric(space, &gens),
            Some(w) => WalkConfig::new(space, gens, w.clone()),
        }
    }
}

/// Numeric knobs; `None` means the command's default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub n: Option<usize>,
    pub trials: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub epsilon: Option<f64>,
    /// Grid spacing of trajectory rows and the estimates monitor.
    pub stride: Option<usize>,
    pub boundary_depth: Option<usize>,
    pub boundary_samples: Option<usize>,
    pub psi_samples: Option<usize>,
    pub variance_samples: Option<usize>,
    pub psi_points: Option<usize>,
    /// Configurations per curtain audit, pairs per geometry audit, triples
    /// per cocycle audit.
    pub configs: Option<usize>,
    pub candidates: Option<usize>,
    /// Largest n of the estimates monitor.
    pub monitor_n: Option<usize>,
    /// Largest allowed Busemann–displacement gap.
    pub max_gap: Option<f64>,
}

impl Overrides {
    /// Fields set in `top` win over those in `self`.
    pub fn merged(&self, top: &Overrides) -> Overrides {
        macro_rules! pick {
            ($($f:ident),*) => { Overrides { $($f: top.$f.or(self.$f)),* } };
        }
        pick!(
            n, trials, l, epsilon, stride, boundary_depth, boundary_samples, psi_samples,
            variance_samples, psi_points, configs, candidates, monitor_n, max_gap
        )
    }
}

/// The on-disk layout. Unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub walk: Option<WalkSpec>,
    #[serde(default)]
    pub overrides: Overrides,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        FileConfig::parse(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkSource {
    Preset(String),
    Explicit(WalkSpec),
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub walk: Option<WalkSource>,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub overrides: Overrides,
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct CliValues {
    pub preset: Option<String>,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub overrides: Overrides,
}

impl ExperimentConfig {
    /// Command line over config file over the environment seed. Writing
    /// outputs (record mode) requires an explicit seed.
    pub fn resolve(cli: CliValues, env_seed: Option<&str>) -> Result<ExperimentConfig> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let env_seed = env_seed
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("CURTAINLAB_SEED={s:?} is not a u64")))
            })
            .transpose()?;
        let walk = match (cli.preset, file.preset, file.walk) {
            (Some(p), _, _) => Some(WalkSource::Preset(p)),
            (None, Some(_), Some(_)) => {
                return Err(Error::Config("give either `preset` or a [walk] section, not both".into()))
            }
            (None, Some(p), None) => Some(WalkSource::Preset(p)),
            (None, None, Some(w)) => Some(WalkSource::Explicit(w)),
            (None, None, None) => None,
        };
        let out = cli.out.or(file.out);
        let seed = cli.seed.or(file.seed).or(env_seed);
        let seed = match (seed, &out) {
            (Some(s), _) => s,
            (None, Some(_)) => {
                return Err(Error::Config(
                    "a seed is required when writing outputs (--seed, `seed` or CURTAINLAB_SEED)".into(),
                ))
            }
            (None, None) => 0,
        };
        let file_top = Overrides {
            n: file.n,
            trials: file.trials,
            ..Overrides::default()
        };
        let overrides = file.overrides.merged(&file_top).merged(&cli.overrides);
        let cfg = ExperimentConfig {
            walk,
            seed,
            format: cli.format.or(file.format).unwrap_or_default(),
            out,
            overrides,
        };
        if let Some(w) = &cfg.walk {
            // surface bad presets and measures as configuration errors
            cfg.build_walk(w)?;
        }
        Ok(cfg)
    }

    fn build_walk(&self, w: &WalkSource) -> Result<WalkConfig> {
        let built = match w {
            WalkSource::Preset(p) => preset(p),
            WalkSource::Explicit(w) => w.build(),
        };
        built.map_err(|e| match e {
            Error::Config(m) => Error::Config(m),
            other => Error::Config(other.to_string()),
        })
    }

    /// The measure, or a configuration error when none was given.
    pub fn walk_config(&self) -> Result<WalkConfig> {
        match &self.walk {
            Some(w) => self.build_walk(w),
            None => Err(Error::Config("this command needs --preset or a [walk] section".into())),
        }
    }

    pub fn space_kind(&self) -> Result<Option<SpaceKind>> {
        match &self.walk {
            Some(w) => Ok(Some(self.build_walk(w)?.space.kind)),
            None => Ok(None),
        }
    }

    pub fn preset_name(&self) -> Option<&str> {
        match &self.walk {
            Some(WalkSource::Preset(p)) => Some(p),
            _ => None,
        }
    }
}
