//! Command-line front end.
//!
//! Every command writes machine-readable output (JSON, CSV or SVG) to stdout
//! or to `--out`; when a file is written a short human-readable summary goes
//! to stdout instead. Exit codes: 0 success, 1 failed verification, 2 bad
//! input.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;

use crate::billiard::{confocal_ellipse, estimate_rotation_confocal, porism_f, rotation_confocal, sweep, EccPair};
use crate::conics::PlanePoint;
use crate::error::{Error, Result};
use crate::pencil::{ParamKind, Pencil, PencilParam, PencilSpec};
use crate::poncelet::{covering, estimate_rotation, invert_rho, polygon, rho_of_nu, PolygonOrbit};
use crate::svg::{ellipse_outline, outer_outline, Scene};
use crate::verify::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(name = "poncelet", version, about = "Rotation numbers, porisms and Poncelet polygons of nested conics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form rotation number, optionally checked against an orbit average.
    Rotation(Opts),
    /// Pencil member (or confocal boundary) with a prescribed rotation number.
    Invert(Opts),
    /// Orbit of a Poncelet map until it closes or `--steps` is reached.
    Polygon(Opts),
    /// Closed form versus orbit rotation numbers over a grid of confocal pairs, as CSV.
    Sweep(Opts),
    /// Run a verification suite and report per-check residuals.
    Verify(Opts),
    /// Draw the conics of a pencil, and an orbit when a member is given, as SVG.
    Render(Opts),
}

#[derive(Debug, Clone, Args)]
struct Opts {
    /// Diagonal pencil with generalized eigenvalues l1 > l2 > l3 > 0.
    #[arg(long, value_delimiter = ',', num_args = 1, value_name = "L1,L2,L3", conflicts_with_all = ["pencil", "confocal"])]
    lambda: Option<Vec<f64>>,
    /// Pencil JSON file: {"C1": conic, "C2": conic} or {"lambda": [..]}.
    #[arg(long, value_name = "FILE", conflicts_with = "confocal")]
    pencil: Option<PathBuf>,
    /// Confocal billiard with caustic eccentricity e and boundary eccentricity f.
    #[arg(long, value_delimiter = ',', num_args = 1, value_name = "E,F")]
    confocal: Option<Vec<f64>>,
    /// Caustic eccentricity for `invert`: solve for the boundary eccentricity.
    #[arg(long = "confocal-e", value_name = "E", conflicts_with_all = ["lambda", "pencil", "confocal"])]
    confocal_e: Option<f64>,
    /// Pencil member nu1 C1 + nu2 C2.
    #[arg(long, value_delimiter = ',', num_args = 1, value_name = "N1,N2", allow_hyphen_values = true)]
    nu: Option<Vec<f64>>,
    /// Rotation number, as p/q or a decimal in (0, 1/2).
    #[arg(long, value_name = "L", allow_hyphen_values = true)]
    ell: Option<String>,
    /// Iterates for orbit estimates, or the step limit for polygons.
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
    /// Sweep grid size, GxG.
    #[arg(long, value_name = "GxG")]
    grid: Option<String>,
    /// Verification suite.
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// SVG drawing, with the orbit JSON written next to it.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

/// Parses arguments, runs one command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Rotation(o) => cmd_rotation(&o),
        Command::Invert(o) => cmd_invert(&o),
        Command::Polygon(o) => cmd_polygon(&o),
        Command::Sweep(o) => cmd_sweep(&o),
        Command::Verify(o) => cmd_verify(&o),
        Command::Render(o) => cmd_render(&o),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.kind());
            2
        }
    }
}

/// Rounds to six significant digits for console summaries.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    rounded.to_string()
}

fn write_or_print(out: Option<&Path>, text: &str, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            write_file(path, text)?;
            println!("{summary}; wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Where the conics come from.
enum Source {
    Pencil(Pencil),
    Confocal(EccPair, Pencil),
}

impl Source {
    fn pencil(&self) -> &Pencil {
        match self {
            Source::Pencil(p) | Source::Confocal(_, p) => p,
        }
    }
}

/// The pencil spanned by the confocal boundary `E(f)` and caustic `E(e)`.
pub fn confocal_pencil(p: EccPair) -> Result<Pencil> {
    Pencil::new(confocal_ellipse(p.f()), confocal_ellipse(p.e()))
}

fn pair(v: &[f64], what: &str) -> Result<(f64, f64)> {
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::InvalidParameter(format!("{what} needs two comma-separated values"))),
    }
}

fn source(o: &Opts) -> Result<Option<Source>> {
    if let Some(l) = &o.lambda {
        let [a, b, c] = l[..] else {
            return Err(Error::InvalidParameter("--lambda needs three comma-separated values".into()));
        };
        return Ok(Some(Source::Pencil(Pencil::from_lambdas(a, b, c)?)));
    }
    if let Some(path) = &o.pencil {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let spec: PencilSpec = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("bad pencil JSON in {}: {e}", path.display())))?;
        return Ok(Some(Source::Pencil(spec.build()?)));
    }
    if let Some(v) = &o.confocal {
        let (e, f) = pair(v, "--confocal")?;
        let p = EccPair::new(e, f)?;
        return Ok(Some(Source::Confocal(p, confocal_pencil(p)?)));
    }
    Ok(None)
}

fn require_source(o: &Opts) -> Result<Source> {
    source(o)?.ok_or_else(|| Error::InvalidParameter("need one of --lambda, --pencil or --confocal".into()))
}

fn member(o: &Opts) -> Result<Option<PencilParam>> {
    o.nu.as_deref().map(|v| pair(v, "--nu").map(|(a, b)| PencilParam::new(a, b))).transpose()
}

/// A rotation number given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ell {
    Exact(Ratio<i64>),
    Decimal(f64),
}

impl Ell {
    /// Parses `p/q` exactly or a decimal, requiring a value in `(0, 1/2)`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse rotation number {s:?}"));
        let ell = match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                let r = Ratio::new(p, q);
                if !(r > Ratio::from_integer(0) && r < Ratio::new(1, 2)) {
                    return Err(Error::InvalidRotation(p as f64 / q as f64));
                }
                Ell::Exact(r)
            }
            None => {
                let x: f64 = s.trim().parse().map_err(|_| bad())?;
                if !(x > 0.0 && x < 0.5) {
                    return Err(Error::InvalidRotation(x));
                }
                Ell::Decimal(x)
            }
        };
        Ok(ell)
    }

    pub fn value(&self) -> f64 {
        match self {
            Ell::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Ell::Decimal(x) => *x,
        }
    }

    /// Period of the closed polygon, for exact input.
    pub fn period(&self) -> Option<usize> {
        match self {
            Ell::Exact(r) => usize::try_from(*r.denom()).ok(),
            Ell::Decimal(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Ell::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Ell::Decimal(x) => x.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
struct RotationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<[f64; 3]>,
    e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<[f64; 2]>,
    f: f64,
    rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

fn cmd_rotation(o: &Opts) -> Result<i32> {
    let report = match require_source(o)? {
        Source::Confocal(p, _) => {
            let rho = rotation_confocal(p);
            let numeric = o.steps.map(|n| estimate_rotation_confocal(p, n)).transpose()?;
            RotationReport {
                lambda: None,
                e: p.e(),
                nu: None,
                f: p.f(),
                rho,
                steps: o.steps,
                rho_numeric: numeric,
                residual: numeric.map(|x| (x - rho).abs()),
            }
        }
        Source::Pencil(p) => {
            let nu = member(o)?.unwrap_or(PencilParam::new(0.0, 1.0));
            let rho = rho_of_nu(&p, nu)?;
            let f = p.standard_f(nu)?;
            let numeric = o.steps.map(|n| estimate_rotation(&p, nu, n)).transpose()?;
            RotationReport {
                lambda: Some(p.spectrum().as_array()),
                e: p.eccentricity(),
                nu: Some([nu.nu1, nu.nu2]),
                f,
                rho,
                steps: o.steps,
                rho_numeric: numeric,
                residual: numeric.map(|x| (x - rho).abs()),
            }
        }
    };
    let mut summary = format!("e = {}, f = {}, rho = {}", sig6(report.e), sig6(report.f), sig6(report.rho));
    if let (Some(x), Some(r)) = (report.rho_numeric, report.residual) {
        summary += &format!(", numeric {} (residual {})", sig6(x), sig6(r));
    }
    write_or_print(o.out.as_deref(), &to_json(&report), &summary)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct InvertReport {
    ell: String,
    ell_value: f64,
    e: f64,
    f: f64,
    nu: [f64; 2],
    rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit: Option<PolygonOrbit>,
}

fn cmd_invert(o: &Opts) -> Result<i32> {
    let ell = Ell::parse(o.ell.as_deref().ok_or_else(|| Error::InvalidParameter("invert needs --ell".into()))?)?;
    let l = ell.value();
    let (source, nu) = match o.confocal_e {
        Some(e) => {
            let p = EccPair::new(e, porism_f(e, l)?)?;
            (Source::Confocal(p, confocal_pencil(p)?), PencilParam::new(0.0, 1.0))
        }
        None => {
            if o.confocal.is_some() {
                return Err(Error::InvalidParameter("invert takes --confocal-e, not --confocal".into()));
            }
            let s = require_source(o)?;
            let nu = invert_rho(s.pencil(), l)?;
            (s, nu)
        }
    };
    let p = source.pencil();
    let orbit = ell.period().map(|q| polygon(p, nu, start(p), q)).transpose()?;
    let report = InvertReport {
        ell: ell.label(),
        ell_value: l,
        e: p.eccentricity(),
        f: p.standard_f(nu)?,
        nu: [nu.nu1, nu.nu2],
        rho: rho_of_nu(p, nu)?,
        orbit,
    };
    let mut summary =
        format!("ell = {}: nu = ({}, {}), f = {}", report.ell, sig6(nu.nu1), sig6(nu.nu2), sig6(report.f));
    if let Source::Confocal(pair, _) = &source {
        summary = format!("ell = {}: e = {}, f = {}", report.ell, sig6(pair.e()), sig6(pair.f()));
    }
    if let Some(orbit) = &report.orbit {
        summary += &format!(", closure residual {}", sig6(orbit.closure_residual));
    }
    if let Some(svg) = &o.svg {
        write_file(svg, &scene(p, Some(nu), report.orbit.as_ref())?.render())?;
        if let Some(orbit) = &report.orbit {
            write_file(&svg.with_extension("json"), &to_json(orbit))?;
        }
    }
    write_or_print(o.out.as_deref(), &to_json(&report), &summary)?;
    Ok(0)
}

/// Every orbit starts at the origin of the covering parameter.
fn start(p: &Pencil) -> PlanePoint {
    covering(p, 0.0)
}

/// Member and default step limit for orbit commands.
fn orbit_member(o: &Opts, p: &Pencil) -> Result<(PencilParam, usize)> {
    let default_steps = 1000;
    if let Some(s) = &o.ell {
        let ell = Ell::parse(s)?;
        let steps = o.steps.or(ell.period()).unwrap_or(default_steps);
        return Ok((invert_rho(p, ell.value())?, steps));
    }
    let nu = member(o)?.unwrap_or(PencilParam::new(0.0, 1.0));
    Ok((nu, o.steps.unwrap_or(default_steps)))
}

fn cmd_polygon(o: &Opts) -> Result<i32> {
    let source = require_source(o)?;
    let p = source.pencil();
    let (nu, steps) = orbit_member(o, p)?;
    let orbit = polygon(p, nu, start(p), steps)?;
    if let Some(svg) = &o.svg {
        write_file(svg, &scene(p, Some(nu), Some(&orbit))?.render())?;
    }
    let summary =
        format!("{} steps, rho = {}, closure residual {}", orbit.steps, sig6(orbit.rho), sig6(orbit.closure_residual));
    write_or_print(o.out.as_deref(), &to_json(&orbit), &summary)?;
    Ok(0)
}

/// Parses `GxG`.
pub fn parse_grid(s: &str) -> Result<usize> {
    let bad = || Error::InvalidParameter(format!("grid must look like 20x20, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a != b || a == 0 {
        return Err(bad());
    }
    Ok(a)
}

fn cmd_sweep(o: &Opts) -> Result<i32> {
    let g = o.grid.as_deref().map(parse_grid).transpose()?.unwrap_or(20);
    let steps = o.steps.unwrap_or(10_000);
    if steps == 0 {
        return Err(Error::InvalidParameter("--steps must be positive".into()));
    }
    let rows = sweep(g, steps)?;
    let mut csv = String::from("e,f,rho_closed_form,rho_numeric,residual\n");
    for r in &rows {
        csv += &format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.e, r.f, r.rho_closed_form, r.rho_numeric, r.residual
        );
    }
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let summary = format!("{} rows, max residual {}", rows.len(), sig6(worst));
    write_or_print(o.out.as_deref(), &csv, &summary)?;
    Ok(0)
}

fn cmd_verify(o: &Opts) -> Result<i32> {
    let suite: Suite = o.suite.as_deref().unwrap_or("all").parse()?;
    let report = run_suite(suite);
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("suite {suite}: {} checks passed", report.checks.len())
    } else {
        format!("suite {suite}: {} of {} checks failed ({})", failed.len(), report.checks.len(), failed.join(", "))
    };
    write_or_print(o.out.as_deref(), &to_json(&report), &summary)?;
    if o.out.is_none() {
        eprintln!("{summary}");
    }
    Ok(if report.passed { 0 } else { 1 })
}

/// Outer and inner conics, the chosen member and an orbit.
fn scene(p: &Pencil, nu: Option<PencilParam>, orbit: Option<&PolygonOrbit>) -> Result<Scene> {
    let mut s = Scene::new();
    s.outline(outer_outline(p), "black");
    s.outline(ellipse_outline(p.inner()), "gray");
    if let Some(nu) = nu {
        match p.classify(nu)? {
            ParamKind::Interior => {
                let m = p.member(nu)?;
                if !nu.same_member(&PencilParam::new(0.0, 1.0), 1e-12) {
                    s.outline(ellipse_outline(&m), "blue");
                }
            }
            ParamKind::Limiting => {
                s.dot(p.limiting_point()?, "blue");
            }
            ParamKind::Outer => {}
        }
    }
    if let Some(orbit) = orbit {
        s.path(orbit.points.clone(), "red");
        if let Some(&z0) = orbit.points.first() {
            s.dot(z0, "red");
        }
    }
    Ok(s)
}

fn cmd_render(o: &Opts) -> Result<i32> {
    let source = require_source(o)?;
    let p = source.pencil();
    let chosen = o.nu.is_some() || o.ell.is_some();
    let (nu, steps) = orbit_member(o, p)?;
    let orbit = if chosen { Some(polygon(p, nu, start(p), steps)?) } else { None };
    let doc = scene(p, chosen.then_some(nu), orbit.as_ref())?.render();
    let target = o.svg.as_deref().or(o.out.as_deref());
    let summary = match &orbit {
        Some(orbit) => format!("{} vertices", orbit.points.len()),
        None => "pencil outline".to_string(),
    };
    write_or_print(target, &doc, &summary)?;
    Ok(0)
}
