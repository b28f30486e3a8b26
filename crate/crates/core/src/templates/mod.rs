//! Prime-density templates `F = F_c + F_d`.

pub mod atoms;
pub mod check;
pub mod grid;
pub mod logint;
pub mod oscillating;
pub mod spec;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmath;

pub use atoms::{Atom, AtomBatch, AtomSource};
pub use check::{check_template, TemplateCheck};
pub use grid::{check_admissible_grid, grid_template, GridAdmissibility};
pub use logint::{li_eval, log_integral_eval};
pub use oscillating::{big_pi_c_eval, pi_c_eval, OscillationParams, OscillationVariant};
pub use spec::TemplateSpec;

/// Tolerance used internally whenever a template evaluates `li`.
pub const EVAL_TOL: f64 = 1e-17;

/// Bisection budget for generic quantiles.
const QUANTILE_MAX_ITER: usize = 200;
/// Bracket width in `log x`, i.e. relative width in `x`. Bisection also stops
/// once the midpoint is no longer representable between the ends.
const QUANTILE_LOG_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContinuousPart {
    None,
    /// `F_c(x) = log x`, i.e. `dF_c = du/u`.
    Log,
    Li,
    Oscillating {
        params: OscillationParams,
        variant: OscillationVariant,
    },
}

impl ContinuousPart {
    fn eval_log(&self, v: f64) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Log => v,
            Self::Li => logint::li_of_log(v, EVAL_TOL),
            Self::Oscillating { params, variant } => match variant {
                OscillationVariant::Prime => oscillating::pi_c_of_log(v, params, EVAL_TOL),
                OscillationVariant::Riemann => oscillating::big_pi_c_of_log(v, params),
            },
        }
    }

    fn density_log(&self, v: f64) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Log => 1.0,
            Self::Li => logint::li_density_log(v),
            Self::Oscillating { params, variant } => oscillating::density_log(v, params, *variant),
        }
    }
}

/// A prime-density template. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Template {
    id: String,
    continuous: ContinuousPart,
    atoms: Option<AtomSource>,
}

impl Template {
    pub fn new(id: impl Into<String>, continuous: ContinuousPart, atoms: Option<AtomSource>) -> Result<Self> {
        if let Some(a) = &atoms {
            a.validate()?;
        }
        if continuous == ContinuousPart::None && atoms.is_none() {
            return Err(Error::Argument("template has neither a continuous nor a discrete part".into()));
        }
        Ok(Self { id: id.into(), continuous, atoms })
    }

    pub fn log() -> Self {
        Self { id: "log".into(), continuous: ContinuousPart::Log, atoms: None }
    }

    pub fn li() -> Self {
        Self { id: "li".into(), continuous: ContinuousPart::Li, atoms: None }
    }

    pub fn oscillating(params: OscillationParams, variant: OscillationVariant) -> Self {
        let id = match variant {
            OscillationVariant::Prime => "oscillating-pi_c",
            OscillationVariant::Riemann => "oscillating-Pi_c",
        };
        Self { id: id.into(), continuous: ContinuousPart::Oscillating { params, variant }, atoms: None }
    }

    pub fn atomic(id: impl Into<String>, atoms: AtomSource) -> Result<Self> {
        Self::new(id, ContinuousPart::None, Some(atoms))
    }

    pub fn with_atoms(mut self, atoms: AtomSource) -> Result<Self> {
        atoms.validate()?;
        self.id = format!("{}+atoms", self.id);
        self.atoms = Some(atoms);
        Ok(self)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn continuous(&self) -> &ContinuousPart {
        &self.continuous
    }

    pub fn atoms(&self) -> Option<&AtomSource> {
        self.atoms.as_ref()
    }

    pub fn has_continuous(&self) -> bool {
        self.continuous != ContinuousPart::None
    }

    pub fn is_purely_continuous(&self) -> bool {
        self.atoms.is_none()
    }

    /// `F_c(x)`; zero for `x ≤ 1`.
    pub fn eval_continuous(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 0.0;
        }
        self.continuous.eval_log(fmath::ln(x))
    }

    pub fn eval_discrete(&self, x: f64) -> f64 {
        self.atoms.as_ref().map_or(0.0, |a| a.mass_upto(x))
    }

    /// `F(x) = F_c(x) + F_d(x)` (right-continuous).
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_continuous(x) + self.eval_discrete(x)
    }

    /// `F(x⁻)`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.eval_continuous(x) + self.atoms.as_ref().map_or(0.0, |a| a.mass_below(x))
    }

    /// Density of `dF_c` against `d(log u)` at `v = log u`.
    pub fn continuous_density_log(&self, v: f64) -> f64 {
        self.continuous.density_log(v)
    }

    /// Points (in `log u`) inside `(lo, hi)` where the continuous density is
    /// not smooth.
    pub fn continuous_breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.continuous {
            ContinuousPart::Oscillating { params, variant } => oscillating::breakpoints(lo, hi, params, *variant),
            _ => Vec::new(),
        }
    }

    /// Largest oscillation frequency (in `log u`) of the continuous density at `v`.
    pub fn continuous_max_frequency(&self, v: f64) -> f64 {
        match &self.continuous {
            ContinuousPart::Oscillating { params, variant } => oscillating::max_frequency(v, params, *variant),
            _ => 0.0,
        }
    }

    pub fn total_continuous_mass(&self) -> f64 {
        match self.continuous {
            ContinuousPart::None => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// Generalized inverse `min{x : F_c(x) ≥ m}`.
    pub fn continuous_quantile(&self, m: f64) -> Result<f64> {
        self.continuous_quantile_in(m, 1.0, f64::NAN)
    }

    /// As [`Self::continuous_quantile`], with a bracket hint `[lo, hi]`
    /// (`hi = NaN` for unknown) that must contain the answer.
    pub fn continuous_quantile_in(&self, m: f64, lo: f64, hi: f64) -> Result<f64> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::Argument(format!("quantile level must be finite and >= 0, got {m}")));
        }
        if m == 0.0 {
            return Ok(1.0);
        }
        match &self.continuous {
            ContinuousPart::None => Err(Error::Argument("template has no continuous mass".into())),
            ContinuousPart::Log if m > 709.0 => {
                Err(Error::Construction { cell: 0, reason: format!("mass {m} not reached below x = e^709") })
            }
            ContinuousPart::Log => Ok(fmath::exp(m)),
            other => {
                let f = |v: f64| other.eval_log(v);
                let v = bisect_log(f, m, fmath::ln(lo.max(1.0)), if hi.is_nan() { f64::NAN } else { fmath::ln(hi) })?;
                Ok(fmath::exp(v))
            }
        }
    }

    /// Constant `C` with `F(x) ≤ C·x/log(x+1)` on `[1, x_max]`, certified on
    /// a log grid: on each cell `[a, b]`, `F(x) ≤ F(b)` and `x/log(x+1) ≥ a/log(a+1)`.
    pub fn chebyshev_constant(&self, x_max: f64) -> f64 {
        let v_max = fmath::ln(x_max.max(1.0 + 1e-9));
        let cells = ((v_max * 64.0).ceil() as usize).max(64);
        let mut c: f64 = 0.0;
        let mut a = 1.0;
        for i in 1..=cells {
            let b = fmath::exp(v_max * i as f64 / cells as f64);
            c = c.max(self.eval(b) * fmath::ln(a + 1.0) / a);
            a = b;
        }
        c
    }
}

/// Smallest `v ≥ v_lo` with `f(v) ≥ m`, for non-decreasing `f`.
fn bisect_log(f: impl Fn(f64) -> f64, m: f64, v_lo: f64, v_hi: f64) -> Result<f64> {
    let mut lo = v_lo;
    let mut hi = if v_hi.is_nan() {
        let mut step = 1.0;
        let mut h = lo + step;
        while f(h) < m {
            lo = h;
            step *= 2.0;
            h += step;
            if h > 709.0 {
                return Err(Error::Construction { cell: 0, reason: format!("mass {m} not reached below x = e^709") });
            }
        }
        h
    } else {
        v_hi
    };
    if f(hi) < m {
        return Err(Error::Construction { cell: 0, reason: format!("bracket upper end misses mass {m}") });
    }
    if f(lo) >= m {
        return Ok(lo);
    }
    for _ in 0..QUANTILE_MAX_ITER {
        if hi - lo <= QUANTILE_LOG_TOL * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
