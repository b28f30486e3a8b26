use std::path::Path;

use anyhow::Result;
use beurling::numsys::{zeta_dirichlet, zeta_euler, ComplexPoint};
use beurling::templates::ContinuousPart;
use beurling::verify::{
    cell_containment, count_deviation, deviation_sweep, log_grid, mertens_identity_check, pi_li_gap_check,
    trend_verdict, z_shape_check, DecadeMax, DeviationRecord, GapPoint, ZShapePoint, MAX_TREND_SLOPE,
};
use beurling::{PrimeSystem, Template};
use serde::Serialize;
use serde_json::{json, Value};

pub const MIN_DECADES: usize = 3;
pub const IDENTITY_PRIMES: usize = 8;
pub const IDENTITY_X: f64 = 1e3;
pub const GAP_LO: f64 = 16.0;
pub const ZSHAPE_SIGMAS: [f64; 3] = [0.6, 0.75, 0.9];
pub const ZSHAPE_TS: [f64; 3] = [0.0, 10.0, 100.0];
/// The Z trend is judged on maxima over independent systems; fewer than
/// this many give a report without a verdict.
pub const ZSHAPE_MIN_SYSTEMS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: Value) -> Self {
        Self { name, status: if pass { Status::Pass } else { Status::Fail }, detail }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Self { name, status: Status::Skipped, detail: json!({ "reason": why }) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckKind {
    All,
    Containment,
    Count,
    Envelope,
    Gap,
    Identity,
    Zeta,
    Zshape,
    U0,
}

pub struct Grids {
    pub x_lo: f64,
    pub points_per_decade: usize,
    pub t_grid: Vec<f64>,
    pub quadrature_tol: f64,
}

fn wanted(which: CheckKind, kind: CheckKind) -> bool {
    which == CheckKind::All || which == kind
}

fn is_li(template: &Template) -> bool {
    *template.continuous() == ContinuousPart::Li && template.atoms().is_none()
}

fn decades_available(lo: f64, hi: f64) -> usize {
    (hi.log10().ceil() - lo.log10().floor()).max(0.0) as usize
}

/// Per-system checks. Trend checks pool over `systems`; the rest run on each.
pub fn run_checks(
    systems: &[PrimeSystem],
    template: &Template,
    which: CheckKind,
    grids: &Grids,
    out: Option<&Path>,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let x_max = systems.iter().map(PrimeSystem::x_max).fold(f64::INFINITY, f64::min);

    let calibrated = systems.iter().any(|ps| ps.meta().calibration.is_some());

    if wanted(which, CheckKind::Containment) {
        if calibrated {
            checks.push(Check::skipped("containment", "calibrated systems are modified after sampling"));
        } else {
            let reps: Vec<_> = systems.iter().map(|ps| cell_containment(ps, template)).collect::<Result<_, _>>()?;
            let pass = reps.iter().all(|r| r.pass);
            let violations: Vec<_> = reps.iter().flat_map(|r| r.violations.iter().take(10)).collect();
            checks.push(Check::new(
                "containment",
                pass,
                json!({ "systems": reps.len(), "violations": reps.iter().map(|r| r.violations.len()).sum::<usize>(), "first": violations }),
            ));
        }
    }

    if wanted(which, CheckKind::Count) {
        let base = if template.is_purely_continuous() { 1.0 } else { 2.0 };
        let mut pass = true;
        let mut max: f64 = 0.0;
        let mut per_system = Vec::new();
        for ps in systems {
            // each removed or duplicated prime moves π by at most one
            let changes = ps.meta().calibration.as_ref().map_or(0, |c| c.removed.len() + c.duplicated.len());
            let bound = base + changes as f64;
            let d = count_deviation(ps, template, 1.0, ps.x_max())?;
            pass &= d.max <= bound;
            max = max.max(d.max);
            per_system.push(json!({ "seed": ps.meta().seed, "bound": bound, "deviation": d }));
        }
        checks.push(Check::new("count", pass, json!({ "bound": base, "sup": max, "per_system": per_system })));
    }

    let trend_ready = decades_available(grids.x_lo, x_max) >= MIN_DECADES;

    if wanted(which, CheckKind::Envelope) {
        if !trend_ready {
            checks.push(Check::skipped("envelope", "needs at least three decades above the grid start"));
        } else {
            let xs = log_grid(grids.x_lo, x_max, grids.points_per_decade);
            let mut runs: Vec<Vec<DecadeMax>> = Vec::new();
            let mut max_ratio: f64 = 0.0;
            let mut records: Vec<(u64, DeviationRecord)> = Vec::new();
            for ps in systems {
                let rep = deviation_sweep(ps, template, &xs, &grids.t_grid, grids.quadrature_tol)?;
                max_ratio = max_ratio.max(rep.summary.max_ratio);
                runs.push(rep.summary.per_decade);
                if out.is_some() {
                    records.extend(rep.records.into_iter().map(|r| (ps.meta().seed, r)));
                }
            }
            let v = trend_verdict(&runs, MIN_DECADES, 1);
            if let Some(dir) = out {
                write_csv(&dir.join("deviation.csv"), records.iter().map(|(seed, r)| DeviationRow::from((*seed, r))))?;
            }
            checks.push(Check::new(
                "envelope",
                v.pass,
                json!({ "max_slope": MAX_TREND_SLOPE, "max_ratio": max_ratio, "trend": v, "per_decade": runs }),
            ));
        }
    }

    if wanted(which, CheckKind::Gap) {
        if !is_li(template) {
            checks.push(Check::skipped("gap", "only defined for the li template"));
        } else if calibrated {
            checks.push(Check::skipped("gap", "calibrated systems are modified after sampling"));
        } else if decades_available(GAP_LO, x_max) < MIN_DECADES {
            checks.push(Check::skipped("gap", "needs at least three decades above 16"));
        } else {
            let mut runs = Vec::new();
            let mut violations = 0;
            let mut max_r: f64 = 0.0;
            let mut rows: Vec<(u64, GapPoint)> = Vec::new();
            for ps in systems {
                let rep = pi_li_gap_check(ps, GAP_LO, x_max)?;
                violations += rep.ceiling_violations;
                max_r = max_r.max(rep.max_r);
                runs.push(rep.per_decade);
                if out.is_some() {
                    rows.extend(rep.points.into_iter().map(|p| (ps.meta().seed, p)));
                }
            }
            let v = trend_verdict(&runs, MIN_DECADES, 1);
            if let Some(dir) = out {
                write_csv(&dir.join("gap.csv"), rows.iter().map(|(seed, p)| GapRow::from((*seed, p))))?;
            }
            checks.push(Check::new(
                "gap",
                v.pass && violations == 0,
                json!({ "max_r": max_r, "ceiling_violations": violations, "trend": v, "per_decade": runs }),
            ));
        }
    }

    if wanted(which, CheckKind::Identity) {
        let mut all = true;
        let mut results = Vec::new();
        for ps in systems {
            let x = IDENTITY_X.min(ps.x_max());
            let c = mertens_identity_check(ps, IDENTITY_PRIMES, x)?;
            all &= c.holds;
            results.push(c);
        }
        checks.push(Check::new("identity", all, json!(results)));
    }

    if wanted(which, CheckKind::Zeta) {
        let s = ComplexPoint::new(2.0, 0.0);
        let mut all = true;
        let mut results = Vec::new();
        for ps in systems {
            let e = zeta_euler(ps, s);
            let d = zeta_dirichlet(ps, s);
            let diff = (e.value - d.value).norm();
            let allowed = e.tail_bound + d.tail_bound;
            all &= diff <= allowed;
            results.push(
                json!({ "seed": ps.meta().seed, "euler": e, "dirichlet": d, "difference": diff, "allowed": allowed }),
            );
        }
        checks.push(Check::new("zeta", all, json!(results)));
    }

    if wanted(which, CheckKind::Zshape) {
        let rep = z_shape_check(systems, &ZSHAPE_SIGMAS, &ZSHAPE_TS)?;
        if let Some(dir) = out {
            write_csv(
                &dir.join("zshape.csv"),
                rep.points.iter().map(|p| ZShapeRow::from((systems[p.run].meta().seed, p))),
            )?;
        }
        let detail = json!({ "fitted": rep.fitted, "t_slopes": rep.t_slopes, "decade_slope": rep.decade_slope, "systems": systems.len() });
        if systems.len() >= ZSHAPE_MIN_SYSTEMS {
            checks.push(Check::new("zshape", rep.pass, detail));
        } else {
            let reason = format!("trend verdict needs at least {ZSHAPE_MIN_SYSTEMS} systems");
            checks.push(Check {
                name: "zshape",
                status: Status::Skipped,
                detail: json!({ "reason": reason, "report": detail }),
            });
        }
    }
    Ok(checks)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: impl Iterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct DeviationRow {
    seed: u64,
    x: f64,
    t: f64,
    side: &'static str,
    deviation: f64,
    envelope: f64,
    ratio: f64,
}

impl From<(u64, &DeviationRecord)> for DeviationRow {
    fn from((seed, r): (u64, &DeviationRecord)) -> Self {
        Self {
            seed,
            x: r.x,
            t: r.t,
            side: side_name(r.side),
            deviation: r.deviation,
            envelope: r.envelope,
            ratio: r.ratio,
        }
    }
}

#[derive(Serialize)]
struct GapRow {
    seed: u64,
    x: f64,
    side: &'static str,
    #[serde(rename = "Pi")]
    big_pi: f64,
    #[serde(rename = "Li")]
    li: f64,
    r: f64,
    ceiling: f64,
}

impl From<(u64, &GapPoint)> for GapRow {
    fn from((seed, p): (u64, &GapPoint)) -> Self {
        Self { seed, x: p.x, side: side_name(p.side), big_pi: p.big_pi, li: p.li, r: p.r, ceiling: p.ceiling }
    }
}

#[derive(Serialize)]
struct ZShapeRow {
    seed: u64,
    truncation: f64,
    sigma: f64,
    t: f64,
    abs_z: f64,
    shape: f64,
    ratio: f64,
}

impl From<(u64, &ZShapePoint)> for ZShapeRow {
    fn from((seed, p): (u64, &ZShapePoint)) -> Self {
        Self { seed, truncation: p.truncation, sigma: p.sigma, t: p.t, abs_z: p.abs_z, shape: p.shape, ratio: p.ratio }
    }
}

fn side_name(s: beurling::verify::Side) -> &'static str {
    match s {
        beurling::verify::Side::Left => "left",
        beurling::verify::Side::Right => "right",
    }
}
