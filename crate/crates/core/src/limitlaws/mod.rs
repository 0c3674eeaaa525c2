//! Drift, boundary measures, the Busemann cocycle and the central limit
//! theorem for displacements.

pub mod boundary;
pub mod clt;
pub mod cocycle;
pub mod drift;
pub mod monitor;
pub mod psi;
pub mod variance;

pub use boundary::{sample_boundary, stationarity_check, BoundarySampleSet, Direction};
pub use clt::{clt_report, limit_law_report, LimitLawBudget, LimitLawReport};
pub use cocycle::{busemann_cocycle, cocycle_audit, cocycle_residual, CocycleAudit, CocycleSample};
pub use drift::{drift_estimate, DriftReport};
pub use monitor::{displacement_busemann_gap, geometric_estimates_monitor, GapReference, GapSeries};
pub use psi::{estimate_psi, PsiEstimator, PsiSummary, PsiValue};
pub use variance::{variance_estimate, VarianceEstimate};
