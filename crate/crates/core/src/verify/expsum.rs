//! `S(x,t) = Σ_{p ≤ x} p^{−it}` and its template counterpart
//! `S_c(x,t) = ∫_1^x u^{−it} dF(u)`.

use num_complex::Complex64;

use crate::discretizer::{PrimeSystem, EPS_MASS};
use crate::error::{Error, Result};
use crate::fmath;
use crate::templates::Template;

/// `u^{−it}` from `log u`.
#[inline]
pub(crate) fn phase(log_u: f64, t: f64) -> Complex64 {
    let a = -t * log_u;
    Complex64::new(fmath::cos(a), fmath::sin(a))
}

pub fn exp_sum(ps: &PrimeSystem, x: f64, t: f64) -> Result<Complex64> {
    ps.check_range(x)?;
    let n = ps.primes().partition_point(|&p| p <= x);
    if t == 0.0 {
        return Ok(Complex64::new(n as f64, 0.0));
    }
    Ok(ps.primes()[..n].iter().map(|&p| phase(fmath::ln(p), t)).sum())
}

const GL_NODES: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
const MAX_DEPTH: u32 = 24;

/// Oscillation-aware quadrature for `∫ e^{−itv} f(v) dv`, `f` the density of
/// `dF_c` in `v = log u`.
///
/// Panels never straddle a template breakpoint and are at most
/// `1/(4(|t| + ω))` wide, `ω` the template's own frequency; each panel is
/// accepted once an 8-point Gauss–Legendre value agrees with the sum over
/// its two halves, otherwise it is halved.
pub struct ContinuousTransform<'a> {
    template: &'a Template,
    t: f64,
    /// Absolute error budget per unit of `v`.
    tol_density: f64,
}

impl<'a> ContinuousTransform<'a> {
    /// `tol` is the absolute error allowed over `[0, v_span]`.
    pub fn new(template: &'a Template, t: f64, tol: f64, v_span: f64) -> Self {
        Self { template, t, tol_density: tol / v_span.max(1.0) }
    }

    fn gl8(&self, a: f64, b: f64) -> Complex64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            for v in [c - h * x, c + h * x] {
                s += w * self.template.continuous_density_log(v) * phase(v, self.t);
            }
        }
        s * h
    }

    fn adaptive(&self, a: f64, b: f64, whole: Complex64, depth: u32) -> Result<Complex64> {
        let m = 0.5 * (a + b);
        let left = self.gl8(a, m);
        let right = self.gl8(m, b);
        let err = (left + right - whole).norm();
        // rounding floor: the phase t·v carries an absolute error of ~ε·|t·v|
        let floor = 64.0 * f64::EPSILON * (1.0 + (self.t * b).abs()) * (left.norm() + right.norm());
        let allowed = (self.tol_density * (b - a)).max(1e-14 * (left + right).norm()).max(floor);
        if err <= allowed {
            return Ok(left + right);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Quadrature { lo: a, hi: b, err });
        }
        Ok(self.adaptive(a, m, left, depth + 1)? + self.adaptive(m, b, right, depth + 1)?)
    }

    /// `∫_{va}^{vb} e^{−itv} f(v) dv` for `0 ≤ va ≤ vb`.
    pub fn integrate(&self, va: f64, vb: f64) -> Result<Complex64> {
        if !(vb > va) || !self.template.has_continuous() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut cuts = vec![va];
        cuts.extend(self.template.continuous_breakpoints(va, vb));
        cuts.push(vb);
        let mut total = Complex64::new(0.0, 0.0);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let omega = self.template.continuous_max_frequency(0.5 * (a + b));
            let width = 1.0 / (4.0 * (self.t.abs() + omega)).max(1.0);
            let panels = ((b - a) / width).ceil().max(1.0) as usize;
            let h = (b - a) / panels as f64;
            for i in 0..panels {
                let lo = a + i as f64 * h;
                let hi = if i + 1 == panels { b } else { lo + h };
                let whole = self.gl8(lo, hi);
                total += self.adaptive(lo, hi, whole, 0)?;
            }
        }
        Ok(total)
    }
}

/// `S_c(x,t)`: quadrature for the continuous part, exact sum over the atoms.
/// At `t = 0` this is `F(x)` itself.
pub fn exp_int(template: &Template, x: f64, t: f64, tol: f64) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("exp_int needs x >= 1, got {x}")));
    }
    if t == 0.0 {
        return Ok(Complex64::new(template.eval(x), 0.0));
    }
    let v = fmath::ln(x);
    let cont = ContinuousTransform::new(template, t, tol, v).integrate(0.0, v)?;
    Ok(cont + atom_sum(template, 1.0, x, t))
}

/// `Σ_{lo < y ≤ hi} α y^{−it}`.
pub(crate) fn atom_sum(template: &Template, lo: f64, hi: f64, t: f64) -> Complex64 {
    let Some(src) = template.atoms() else { return Complex64::new(0.0, 0.0) };
    let batch = src.atoms_in(lo, hi, EPS_MASS);
    batch.atoms.iter().map(|a| a.mass * phase(fmath::ln(a.position), t)).sum()
}
