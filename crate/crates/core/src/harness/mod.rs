//! Configuration, presets, experiment runners and their outputs.

pub mod config;
pub mod defaults;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{CliValues, ExperimentConfig, FileConfig, Format, Overrides, WalkSpec};
pub use output::{Check, RunManifest, Table};
pub use presets::{oracle, preset, PresetInfo, PRESETS};
pub use run::{choose_l, execute, run, Command, LChoice, Report};
