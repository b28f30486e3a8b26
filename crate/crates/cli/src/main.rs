mod checks;
mod config;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use beurling::discretizer::{calibrate_z1, discretize, CalibrationConfig};
use beurling::numsys::{z_eval, zeta_dirichlet, zeta_euler, Analytics, ComplexPoint};
use beurling::templates::{check_admissible_grid, check_template, TemplateSpec};
use beurling::verify::{log_grid, solve_u0};
use beurling::PrimeSystem;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use checks::{run_checks, CheckKind, Grids, Status};
use config::{RunConfig, TemplateRef};

#[derive(Parser)]
#[command(name = "beurling", version, about = "Construct and verify generalized prime systems")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check monotonicity, quantiles and structural invariants of a template.
    TemplateCheck {
        #[arg(long)]
        template: String,
        #[arg(long, default_value_t = 1e6)]
        x_max: f64,
        #[arg(long, default_value_t = 4096)]
        points: usize,
    },
    /// Sample a prime system from a template.
    Discretize(DiscretizeArgs),
    /// Counting functions on an x grid as CSV (x, pi, Pi, N, M, L).
    Analyze {
        system: PathBuf,
        /// Explicit comma-separated x values.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        /// Log grid density when no explicit x values are given.
        #[arg(long, default_value_t = 4)]
        per_decade: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the zeta function or Z at s = sigma + i t.
    Zeta {
        system: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = ZetaMethod::All)]
        method: ZetaMethod,
    },
    /// Run verification checks on a system file.
    Verify(VerifyArgs),
    /// Full pipeline from a config: sample every seed, export analytics, run all checks.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct DiscretizeArgs {
    /// JSON or TOML run config; command-line values override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    template: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    x_max: Option<f64>,
    /// Adjust the system so the truncated Z(1) is near zero.
    #[arg(long)]
    calibrate: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    system: Option<PathBuf>,
    /// Defaults to the template recorded in the system file.
    #[arg(long)]
    template: Option<String>,
    #[arg(long, value_enum, default_value_t = CheckKind::All)]
    check: CheckKind,
    /// Directory for summary.json and per-point CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 10.0)]
    x_lo: f64,
    #[arg(long, default_value_t = beurling::verify::DEFAULT_POINTS_PER_DECADE)]
    per_decade: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZetaMethod {
    Euler,
    Dirichlet,
    Z,
    All,
}

/// Verification outcome, distinct from configuration and IO errors.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::TemplateCheck { template, x_max, points } => cmd_template_check(&template, x_max, points),
        Command::Discretize(a) => cmd_discretize(a),
        Command::Analyze { system, x, per_decade, output } => cmd_analyze(&system, &x, per_decade, output.as_deref()),
        Command::Zeta { system, sigma, t, method } => cmd_zeta(&system, sigma, t, method),
        Command::Verify(a) => cmd_verify(a),
        Command::Report { config } => cmd_report(&config),
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_template_check(template: &str, x_max: f64, points: usize) -> Result<Outcome> {
    let spec = TemplateRef::Name(template.into()).resolve(None)?;
    let t = config::build(&spec)?;
    let report = check_template(&t, x_max, points)?;
    let mut pass = report.pass;
    let mut grid = None;
    if let TemplateSpec::Grid { grid: g, .. } = &spec {
        let a = check_admissible_grid(
            &g.points(),
            &beurling::verify::default_t_grid(),
            beurling::templates::grid::DEFAULT_GROWTH_FACTOR,
        )?;
        pass &= a.admissible();
        grid = Some(a);
    }
    print_json(&json!({ "template": report, "grid": grid, "pass": pass }))?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn sample(
    spec: &TemplateSpec,
    seed: u64,
    x_max: f64,
    calibrate: Option<&CalibrationConfig>,
    echo: serde_json::Value,
) -> Result<PrimeSystem> {
    let template = config::build(spec)?;
    let mut ps = discretize(&template, seed, x_max).with_context(|| format!("discretizing seed {seed}"))?;
    if let Some(cfg) = calibrate {
        let (calibrated, report) = calibrate_z1(&ps, cfg)?;
        ps = calibrated;
        ps.meta_mut().calibration = Some(report);
    }
    ps.meta_mut().config = Some(echo);
    Ok(ps)
}

fn write_system(ps: &PrimeSystem, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(f);
    ps.write(&mut w)?;
    w.flush()?;
    Ok(())
}

fn read_system(path: &Path) -> Result<PrimeSystem> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    PrimeSystem::read(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn cmd_discretize(a: DiscretizeArgs) -> Result<Outcome> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => {
            let Some(template) = &a.template else { bail!("discretize needs --template or --config") };
            let Some(x_max) = a.x_max else { bail!("discretize needs --x-max or --config") };
            let mut c: RunConfig =
                serde_json::from_value(json!({ "template": template, "seeds": [0], "x_max": x_max }))?;
            c.template = TemplateRef::Inline(c.template.resolve(None)?);
            c
        }
    };
    if let Some(t) = &a.template {
        cfg.template = TemplateRef::Inline(TemplateRef::Name(t.clone()).resolve(None)?);
    }
    if let Some(x) = a.x_max {
        cfg.x_max = x;
    }
    if let Some(s) = a.seed {
        cfg.seeds = vec![s];
    }
    if a.calibrate && cfg.calibrate.is_none() {
        cfg.calibrate = Some(CalibrationConfig::default());
    }
    cfg.validate()?;
    let spec = cfg.spec()?;
    for &seed in &cfg.seeds {
        let mut echo = cfg.clone();
        echo.seeds = vec![seed];
        let ps = sample(&spec, seed, cfg.x_max, cfg.calibrate.as_ref(), serde_json::to_value(&echo)?)?;
        match (&a.output, cfg.seeds.len()) {
            (Some(path), 1) => write_system(&ps, path)?,
            (None, 1) if a.config.is_none() => {
                let mut out = std::io::stdout().lock();
                ps.write(&mut out)?;
            }
            (dir, _) => {
                let dir = dir.clone().unwrap_or_else(|| cfg.output.clone());
                write_system(&ps, &dir.join(format!("system-{seed}.txt")))?;
            }
        }
        eprintln!("seed {seed}: {} primes up to {}", ps.len(), ps.x_max());
    }
    Ok(Outcome::Pass)
}

fn analyze_grid(x_max: f64, per_decade: usize) -> Vec<f64> {
    let mut xs = vec![1.0];
    if x_max >= 10.0 && per_decade > 0 {
        xs.extend(log_grid(10.0, x_max, per_decade));
    }
    if *xs.last().unwrap() < x_max {
        xs.push(x_max);
    }
    xs
}

fn write_analytics<W: std::io::Write>(ps: &PrimeSystem, xs: &[f64], w: W) -> Result<()> {
    let a = Analytics::new(ps);
    let mut w = csv::Writer::from_writer(w);
    for &x in xs {
        w.serialize(a.row(x)?)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_analyze(system: &Path, x: &[f64], per_decade: usize, output: Option<&Path>) -> Result<Outcome> {
    let ps = read_system(system)?;
    let xs = if x.is_empty() { analyze_grid(ps.x_max(), per_decade) } else { x.to_vec() };
    match output {
        Some(p) => write_analytics(
            &ps,
            &xs,
            BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        )?,
        None => match write_analytics(&ps, &xs, std::io::stdout().lock()) {
            Err(e) if is_broken_pipe(&e) => {}
            r => r?,
        },
    }
    Ok(Outcome::Pass)
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(
                |c| matches!(c.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe),
            )
    })
}

fn cmd_zeta(system: &Path, sigma: f64, t: f64, method: ZetaMethod) -> Result<Outcome> {
    let ps = read_system(system)?;
    let s = ComplexPoint::new(sigma, t);
    let mut out = serde_json::Map::new();
    if matches!(method, ZetaMethod::Euler | ZetaMethod::All) {
        out.insert("euler".into(), json!(zeta_euler(&ps, s)));
    }
    if matches!(method, ZetaMethod::Dirichlet | ZetaMethod::All) {
        out.insert("dirichlet".into(), json!(zeta_dirichlet(&ps, s)));
    }
    if matches!(method, ZetaMethod::Z | ZetaMethod::All) {
        match z_eval(&ps, s) {
            Ok(z) => out.insert("z".into(), json!(z)),
            Err(e) if method == ZetaMethod::All => out.insert("z".into(), json!({ "error": e.to_string() })),
            Err(e) => return Err(e.into()),
        };
    }
    print_json(&serde_json::Value::Object(out))?;
    Ok(Outcome::Pass)
}

/// Template for a system: explicit argument, else the spec echoed into the
/// file's metadata, else the recorded template id as a built-in name.
fn template_for(ps: &PrimeSystem, arg: Option<&str>) -> Result<TemplateSpec> {
    if let Some(t) = arg {
        return TemplateRef::Name(t.into()).resolve(None);
    }
    if let Some(spec) = ps.meta().config.as_ref().and_then(|c| c.get("template")) {
        let r: TemplateRef = serde_json::from_value(spec.clone()).context("template recorded in the system file")?;
        return r.resolve(None);
    }
    TemplateSpec::named(&ps.meta().template_id)
        .with_context(|| format!("system records template `{}`; pass --template", ps.meta().template_id))
}

fn finish_checks(checks: &[checks::Check], extra: serde_json::Value, out: Option<&Path>) -> Result<Outcome> {
    let pass = checks.iter().all(|c| c.status != Status::Fail);
    for c in checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        eprintln!("{tag} {}", c.name);
    }
    let summary = json!({ "pass": pass, "checks": checks, "run": extra });
    match out {
        Some(dir) => {
            let mut f = BufWriter::new(File::create(dir.join("summary.json"))?);
            serde_json::to_writer_pretty(&mut f, &summary)?;
            writeln!(f)?;
            f.flush()?;
        }
        None => print_json(&summary)?,
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_verify(a: VerifyArgs) -> Result<Outcome> {
    if a.check == CheckKind::U0 {
        println!("{:.10}", solve_u0());
        return Ok(Outcome::Pass);
    }
    let Some(path) = &a.system else { bail!("verify needs a system file (except --check u0)") };
    if !(a.tol > 0.0) {
        bail!("--tol must be positive");
    }
    let ps = read_system(path)?;
    let spec = template_for(&ps, a.template.as_deref())?;
    let template = config::build(&spec)?;
    let grids = Grids {
        x_lo: a.x_lo,
        points_per_decade: a.per_decade,
        t_grid: if a.t.is_empty() { beurling::verify::default_t_grid() } else { a.t.clone() },
        quadrature_tol: a.tol,
    };
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let checks = run_checks(std::slice::from_ref(&ps), &template, a.check, &grids, a.out.as_deref())?;
    finish_checks(&checks, json!({ "system": path, "template": spec, "meta": ps.meta() }), a.out.as_deref())
}

fn cmd_report(config: &Path) -> Result<Outcome> {
    let cfg = RunConfig::load(config)?;
    let spec = cfg.spec()?;
    std::fs::create_dir_all(&cfg.output).with_context(|| format!("creating {}", cfg.output.display()))?;
    let mut systems = Vec::new();
    for &seed in &cfg.seeds {
        let mut echo = cfg.clone();
        echo.seeds = vec![seed];
        let ps = sample(&spec, seed, cfg.x_max, cfg.calibrate.as_ref(), serde_json::to_value(&echo)?)?;
        write_system(&ps, &cfg.output.join(format!("system-{seed}.txt")))?;
        let xs = analyze_grid(ps.x_max(), 4);
        let f = File::create(cfg.output.join(format!("analytics-{seed}.csv")))?;
        write_analytics(&ps, &xs, BufWriter::new(f))?;
        systems.push(ps);
    }
    let template = config::build(&spec)?;
    let grids = Grids {
        x_lo: cfg.x_grid.lo,
        points_per_decade: cfg.x_grid.points_per_decade,
        t_grid: cfg.t_grid.clone(),
        quadrature_tol: cfg.tolerances.quadrature,
    };
    let checks = run_checks(&systems, &template, CheckKind::All, &grids, Some(&cfg.output))?;
    finish_checks(&checks, json!({ "config": cfg }), Some(&cfg.output))
}
