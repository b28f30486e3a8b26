//! Grid-based soundness checks for a template on `[1, x_max]`.

use serde::Serialize;

use super::oscillating::ParamsCheck;
use super::{ContinuousPart, Template};
use crate::error::{Error, Result};
use crate::fmath;

/// Relative tolerance for `F_c(Q(m)) = m`.
pub const QUANTILE_ROUND_TRIP_REL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemplateCheck {
    pub id: String,
    pub x_max: f64,
    pub points: usize,
    /// Grid points where `F` decreased.
    pub monotone_violations: usize,
    /// `max |F_c(Q(m)) − m| / max(m, 1)` over the sampled levels.
    pub quantile_round_trip: f64,
    /// Levels whose quantile overshot the sampled point `Q(F_c(x)) > x`.
    pub quantile_overshoots: usize,
    pub chebyshev_c: f64,
    pub oscillation: Option<ParamsCheck>,
    pub pass: bool,
}

/// Evaluate `F` on a log grid of `points` nodes over `[1, x_max]`; check
/// monotonicity, `F(1) = 0`, the quantile round trip, and for oscillating
/// templates the block invariants.
pub fn check_template(template: &Template, x_max: f64, points: usize) -> Result<TemplateCheck> {
    if !(x_max > 1.0) || points < 2 {
        return Err(Error::Argument("template check needs x_max > 1 and at least two points".into()));
    }
    let v_max = fmath::ln(x_max);
    let xs: Vec<f64> = (0..points).map(|i| fmath::exp(v_max * i as f64 / (points - 1) as f64)).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| template.eval(x)).collect();
    let monotone_violations = fs.windows(2).filter(|w| w[1] < w[0]).count() + usize::from(fs[0] != 0.0);

    let mut quantile_round_trip: f64 = 0.0;
    let mut quantile_overshoots = 0;
    if template.has_continuous() {
        for &x in xs.iter().skip(1) {
            let m = template.eval_continuous(x);
            let q = template.continuous_quantile(m)?;
            quantile_round_trip = quantile_round_trip.max((template.eval_continuous(q) - m).abs() / m.max(1.0));
            if q > x * (1.0 + 1e-12) {
                quantile_overshoots += 1;
            }
        }
    }
    let oscillation = match template.continuous() {
        ContinuousPart::Oscillating { params, .. } => Some(params.check()),
        _ => None,
    };
    let osc_ok = oscillation.as_ref().is_none_or(|c| c.disjoint && c.monotone_threshold_met);
    let pass = monotone_violations == 0
        && quantile_round_trip <= QUANTILE_ROUND_TRIP_REL
        && quantile_overshoots == 0
        && osc_ok;
    Ok(TemplateCheck {
        id: template.id().to_string(),
        x_max,
        points,
        monotone_violations,
        quantile_round_trip,
        quantile_overshoots,
        chebyshev_c: template.chebyshev_constant(x_max),
        oscillation,
        pass,
    })
}
