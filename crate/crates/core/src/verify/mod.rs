//! Checks of a discretized system against its template and against the
//! bounds it is expected to satisfy.

pub mod arith;
pub mod deviation;
pub mod expsum;
pub mod gap;
pub mod lemma;
pub mod support;
pub mod trend;
pub mod zshape;

pub use arith::{mertens_identity_check, mertens_identity_on, MertensCheck};
pub use deviation::{
    count_deviation, default_t_grid, deviation_sweep, envelope, log_grid, CountDeviation, DeviationRecord,
    DeviationReport, DeviationSummary, Side, DEFAULT_POINTS_PER_DECADE,
};
pub use expsum::{exp_int, exp_sum, ContinuousTransform};
pub use gap::{gap_ceiling, pi_li_gap_check, GapPoint, GapReport};
pub use lemma::{kolmogorov_check, lemma_bound, solve_u0, wilson_lower, BoundedModel, KolmogorovReport, Z_99};
pub use support::{cell_containment, off_support, ContainmentReport, ContainmentViolation};
pub use trend::{decade_maxima, loglog_slope, trend_verdict, DecadeMax, TrendVerdict, MAX_TREND_SLOPE};
pub use zshape::{z_shape, z_shape_check, ZShapePoint, ZShapeReport};
