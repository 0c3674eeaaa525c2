//! Every numeric default of the laboratory, in one place.
//!
//! | name | value | used by |
//! |---|---|---|
//! | `WALK_N` | 10 000 | trajectory length |
//! | `TRIALS` | 2 000 | trials per batch |
//! | `BOUNDARY_DEPTH` | 1 000 | ray comparison depth |
//! | `BOUNDARY_WALK_DEPTH_TREE` | 200 | walk length behind a tree boundary sample |
//! | `BOUNDARY_WALK_DEPTH_HYPERBOLIC` | 40 | walk length behind an ideal-point sample |
//! | `BOUNDARY_SAMPLES` | 10 000 | samples of ν or ν̌ |
//! | `PSI_SAMPLES` | 40 000 | ν̌ samples per ψ estimate |
//! | `VARIANCE_SAMPLES` | 4 000 | x ~ ν̂ points in the variance formula |
//! | `PSI_SAMPLES_CLOSED_FORM` | 4 000 | ν̌ samples per ψ estimate off trees |
//! | `VARIANCE_SAMPLES_CLOSED_FORM` | 1 000 | x points in the variance formula off trees |
//! | `DRIFT_CHECK_N` | 400 | walk length of the positive-drift check |
//! | `DRIFT_CHECK_TRIALS` | 200 | trials of the positive-drift check |
//! | `COCYCLE_TOLERANCE` | 1e-8 | cocycle residual contract |
//! | `RENORMALIZE_EVERY` | 64 | matrix compositions between renormalizations |
//! | `PROBE_BALLS` | 50 | balls in the contraction probe |
//! | `CONTRACTING_GRID` | 25, 50, 100, 200 | n-grid for contracting fractions |
//! | `MONITOR_STRIDE` | 10 | n-grid spacing of the estimates monitor |
//! | `DRIFT_REFUSAL_SE` | 3 | drift must exceed this many standard errors |
//! | `DRIFT_STABILITY` | 0.25 | allowed relative change of λ̂ between n/2 and n |
//! | `KS_MIN_TRIALS` | 200 | smallest CLT batch |
//! | `L_SEARCH_MAX` | 10 | largest L tried when choosing L |
//! | `FALSIFIER_CANDIDATES` | 200 | dual geodesics per curtain pair |
//! | `FALSIFIER_CLOUD` | 64 | sampled points per curtain |
//! | `FALSIFIER_WINDOW_EXTRA` | 10 | window radius is d + this |
//! | `AUDIT_CONFIGS` | 1 000 | sampled configurations per curtain audit |
//! | `FOUR_POINT_SAMPLES` | 1 000 | quadruples in the four-point audit |
//! | `WALK_COMMAND_N` | 5 000 | trajectory length of the walk command |
//! | `WALK_COMMAND_TRIALS` | 100 | trajectories and monitor pairs of the walk command |
//! | `MONITOR_N` | 2 000 | largest n of the estimates monitor |
//! | `MONITOR_FROM` | 100 | the monitor pass rate counts n from here |
//! | `MAX_GAP_TREE` | 50 | largest allowed Busemann–displacement gap on trees |
//! | `MAX_GAP_OTHER` | 100 | the same bound elsewhere |
//! | `PSI_POINTS` | 100 | boundary points where ψ is estimated |
//! | `PSI_STABILITY` | 0.02 | allowed change of sup ψ when ν̌ samples double (relative above 1) |
//! | `KS_DISTANCE_MIN_TRIALS` | 1 000 | the KS distance bound is checked from this batch size |
//! | `CONTRACTING_TRIALS` | 500 | trials per contracting-fraction point |
//! | `L_SEARCH_SEGMENT` | 4 | least length of the shortest axis segment when choosing L |
//! | `BOTTLENECK_PER_SEGMENT` | 50 | (x₂, y₂) pairs per sampled chain |
//! | `BOTTLENECK_LENGTH` | 12 | length of the dual geodesic behind a sampled chain |
//! | `GEOMETRY_PAIRS` | 1 000 | point pairs per space in the metric sandwich audit |
//! | `GEOMETRY_CANDIDATES` | 30 | dual geodesics per curtain pair in the metric sandwich audit |
//! | `GEOMETRY_RADIUS` | 6 | sampling radius of those points |
//! | `COCYCLE_TRIPLES` | 10 000 | (g₁, g₂, ξ) triples per space |
//! | `COCYCLE_ELEMENT_SIZE` | 6 | word size of the sampled elements |

pub const WALK_N: usize = 10_000;
pub const TRIALS: usize = 2_000;
pub const BOUNDARY_DEPTH: usize = crate::geometry::BOUNDARY_DEPTH;
pub const BOUNDARY_WALK_DEPTH_TREE: usize = 200;
pub const BOUNDARY_WALK_DEPTH_HYPERBOLIC: usize = 40;
pub const BOUNDARY_SAMPLES: usize = 10_000;
pub const PSI_SAMPLES: usize = 40_000;
pub const VARIANCE_SAMPLES: usize = 4_000;
pub const PSI_SAMPLES_CLOSED_FORM: usize = 4_000;
pub const VARIANCE_SAMPLES_CLOSED_FORM: usize = 1_000;
pub const DRIFT_CHECK_N: usize = 400;
pub const DRIFT_CHECK_TRIALS: usize = 200;
pub const COCYCLE_TOLERANCE: f64 = 1e-8;
pub const RENORMALIZE_EVERY: usize = 64;
pub const PROBE_BALLS: usize = 50;
pub const CONTRACTING_GRID: [usize; 4] = [25, 50, 100, 200];
pub const MONITOR_STRIDE: usize = 10;
pub const DRIFT_REFUSAL_SE: f64 = 3.0;
pub const DRIFT_STABILITY: f64 = 0.25;
pub const KS_MIN_TRIALS: usize = 200;
pub const L_SEARCH_MAX: usize = 10;
pub const FALSIFIER_CANDIDATES: usize = 200;
pub const FALSIFIER_CLOUD: usize = 64;
pub const FALSIFIER_WINDOW_EXTRA: f64 = 10.0;
pub const AUDIT_CONFIGS: usize = 1_000;
pub const FOUR_POINT_SAMPLES: usize = 1_000;
pub const WALK_COMMAND_N: usize = 5_000;
pub const WALK_COMMAND_TRIALS: usize = 100;
pub const MONITOR_N: usize = 2_000;
pub const MONITOR_FROM: usize = 100;
pub const MAX_GAP_TREE: f64 = 50.0;
pub const MAX_GAP_OTHER: f64 = 100.0;
pub const PSI_POINTS: usize = 100;
pub const PSI_STABILITY: f64 = 0.02;
pub const KS_DISTANCE_MIN_TRIALS: usize = 1_000;
pub const CONTRACTING_TRIALS: usize = 500;
pub const L_SEARCH_SEGMENT: f64 = 4.0;
pub const BOTTLENECK_PER_SEGMENT: usize = 50;
pub const BOTTLENECK_LENGTH: f64 = 12.0;
pub const GEOMETRY_PAIRS: usize = 1_000;
pub const GEOMETRY_CANDIDATES: usize = 30;
pub const GEOMETRY_RADIUS: f64 = 6.0;
pub const COCYCLE_TRIPLES: usize = 10_000;
pub const COCYCLE_ELEMENT_SIZE: usize = 6;
