//! Group elements, random walks and their classification.

pub mod classify;
pub mod isometry;
pub mod walk;

pub use classify::{
    classify, classify_with_probe, contracting_fraction, translation_length, Classification,
    Contracting, FractionPoint, Kind, TranslationLength,
};
pub use isometry::{Isometry, Mobius, Rigid};
pub use walk::{trajectory, TrajectoryRow, Walk, WalkConfig};
