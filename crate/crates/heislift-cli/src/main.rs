//! Batch front-end for the heislift library.
//!
//! Subcommands: `lift`, `check-contact`, `distortion`, `curve-lift`,
//! `holonomy`, `catalog list`. Machine output (JSON or CSV) goes to stdout or
//! `--out`; diagnostics go to stderr. Two runs with the same configuration
//! produce byte-identical reports.
//!
//! Exit codes: 0 success, 1 residual breach (or other failure), 2 symplectic
//! gate rejection, 3 quadrature non-convergence, 4 malformed curve file.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use heislift::catalog::{catalog_listing, MapSpec};
use heislift::contact::{fmt_g17, full_report, ContactReport, StarMap};
use heislift::curves::{
    group_curve_to_csv, group_curve_to_json, holonomy_closed, lift_hyperbolic_curve,
    lift_plane_curve_heis, parse_curve, CurveData, PlaneCurve, PlaneDomain,
};
use heislift::grid::GridSpec;
use heislift::group::{alpha_coord, GroupKind};
use heislift::lifting::{lift_heis, lift_star, LiftOpts};
use heislift::Error;

#[derive(Parser)]
#[command(
    name = "heislift",
    version,
    about = "Contact analysis and symplectic lifting on the Heisenberg and hyperbolic Heisenberg groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Lift a planar map and report the contact verification per grid point.
    Lift {
        /// Map spec JSON, e.g. '{"name":"twist","k":2.0,"c":0.0}', or a bare name.
        #[arg(long)]
        map: String,
        /// Grid spec JSON (defaults to the standard grid).
        #[arg(long)]
        grid: Option<String>,
        /// Residual tolerance for the exit status.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Emit the lift even if the symplectic gate fails (tagged in output).
        #[arg(long)]
        force: bool,
        /// Potential basepoint "re,im" (default "-1,0" for ℒ, "0,0" for ℂ).
        #[arg(long)]
        basepoint: Option<String>,
        /// Constant added to the potential (rotates f_I by a fixed phase).
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
    },
    /// Pointwise contact residuals, λ*, singular values, K and μ over a grid.
    CheckContact {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Distortion sweep: like check-contact, with a K/μ summary emphasis.
    Distortion {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Horizontally lift a curve file into ℍ (kind heis) or ℍ* (kind star).
    CurveLift {
        /// Input curve file: CSV 's,re,im' or the JSON equivalent.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Initial t (heis) or fibre angle θ (star).
        #[arg(long, default_value_t = 0.0)]
        basepoint: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Holonomy of the horizontal lift of a closed source curve.
    Holonomy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Catalog inspection.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Heis,
    Star,
}

impl Kind {
    fn group(self) -> GroupKind {
        match self {
            Kind::Heis => GroupKind::Heis,
            Kind::Star => GroupKind::Star,
        }
    }
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the addressable map families and their parameters.
    List {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotSymplectic { .. } => 2,
        Error::QuadratureNonConvergence(_) => 3,
        Error::MalformedCurveFile(_) => 4,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Lift {
            map,
            grid,
            tol,
            out,
            format,
            force,
            basepoint,
            phase,
        } => cmd_lift(
            &map,
            grid.as_deref(),
            tol,
            out,
            format,
            force,
            basepoint.as_deref(),
            phase,
        ),
        Command::CheckContact {
            map,
            grid,
            tol,
            out,
            format,
        } => cmd_analyze("check-contact", &map, grid.as_deref(), tol, out, format),
        Command::Distortion {
            map,
            grid,
            tol,
            out,
            format,
        } => cmd_analyze("distortion", &map, grid.as_deref(), tol, out, format),
        Command::CurveLift {
            input,
            kind,
            basepoint,
            out,
            format,
        } => cmd_curve_lift(&input, kind, basepoint, out, format),
        Command::Holonomy { input, kind, out } => cmd_holonomy(&input, kind, out),
        Command::Catalog {
            action: CatalogAction::List { out },
        } => cmd_catalog_list(out),
    }
}

fn parse_map(text: &str) -> Result<MapSpec, Error> {
    // allow a bare name as shorthand for '{"name": ...}'
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        MapSpec::parse(trimmed)
    } else {
        MapSpec::parse(&format!("{{\"name\":\"{trimmed}\"}}"))
    }
}

fn parse_grid(text: Option<&str>) -> Result<GridSpec, Error> {
    match text {
        None => Ok(GridSpec::standard()),
        Some(t) => serde_json::from_str(t)
            .map_err(|e| Error::DomainViolation(format!("invalid grid spec: {e}"))),
    }
}

fn check_tol(tol: f64) -> Result<(), Error> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainViolation("tolerance must be positive".into()))
    }
}

fn parse_basepoint(text: Option<&str>, default: Complex64) -> Result<Complex64, Error> {
    match text {
        None => Ok(default),
        Some(t) => {
            let parts: Vec<&str> = t.split(',').map(|p| p.trim()).collect();
            if parts.len() != 2 {
                return Err(Error::DomainViolation("basepoint must be 're,im'".into()));
            }
            let re: f64 = parts[0]
                .parse()
                .map_err(|_| Error::DomainViolation("basepoint re is not a number".into()))?;
            let im: f64 = parts[1]
                .parse()
                .map_err(|_| Error::DomainViolation("basepoint im is not a number".into()))?;
            Ok(Complex64::new(re, im))
        }
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            let terminated = if text.ends_with('\n') {
                text.to_string()
            } else {
                format!("{text}\n")
            };
            std::fs::write(&path, terminated).map_err(|e| {
                Error::DomainViolation(format!("cannot write {}: {e}", path.display()))
            })
        }
        None => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

struct LiftRow {
    zeta: Complex64,
    psi: f64,
    f_i: Complex64,
    f_3: f64,
    r1: f64,
    r2: f64,
    lambda: f64,
    k: f64,
    mu: Complex64,
}

impl LiftRow {
    fn json(&self) -> serde_json::Value {
        json!({
            "zeta_re": self.zeta.re, "zeta_im": self.zeta.im,
            "psi": self.psi,
            "f_i_re": self.f_i.re, "f_i_im": self.f_i.im,
            "f_3": self.f_3,
            "R1": self.r1, "R2": self.r2,
            "lambda_star": self.lambda,
            "K": self.k,
            "mu_re": self.mu.re, "mu_im": self.mu.im,
        })
    }

    const CSV_HEADER: &'static str =
        "zeta_re,zeta_im,psi,f_i_re,f_i_im,f_3,R1,R2,lambda_star,K,mu_re,mu_im";

    fn csv(&self) -> String {
        [
            self.zeta.re,
            self.zeta.im,
            self.psi,
            self.f_i.re,
            self.f_i.im,
            self.f_3,
            self.r1,
            self.r2,
            self.lambda,
            self.k,
            self.mu.re,
            self.mu.im,
        ]
        .iter()
        .map(|v| fmt_g17(*v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_lift(
    map: &str,
    grid: Option<&str>,
    tol: f64,
    out: Option<PathBuf>,
    format: Format,
    force: bool,
    basepoint: Option<&str>,
    phase: f64,
) -> Result<u8, Error> {
    check_tol(tol)?;
    let spec = parse_map(map)?;
    let entry = spec.build()?;
    let planar = entry.planar.clone().ok_or_else(|| {
        Error::DomainViolation(format!("map '{}' has no planar source to lift", entry.name))
    })?;
    let points = parse_grid(grid)?.points()?;
    let kind = spec.target();

    let mut rows = Vec::with_capacity(points.len());
    let mut max_residual: f64 = 0.0;
    let forced;

    match kind {
        GroupKind::Star => {
            let base = parse_basepoint(basepoint, Complex64::new(-1.0, 0.0))?;
            let lift = lift_star(
                planar,
                LiftOpts {
                    basepoint: base,
                    phase,
                    force,
                    gate_tol: None,
                },
            )?;
            forced = lift.forced;
            for p in &points {
                let zeta = alpha_coord(p.z, p.t);
                let rep = full_report(&lift, p.z, p.t, GroupKind::Star)?;
                let (f_i, f_3) = lift.try_eval(p.z, p.t)?;
                let res = rep
                    .r1
                    .norm()
                    .max(rep.r2.norm())
                    .max((rep.lambda_star - 1.0).abs());
                max_residual = max_residual.max(res);
                rows.push(LiftRow {
                    zeta,
                    psi: lift.psi(zeta)? + phase,
                    f_i,
                    f_3,
                    r1: rep.r1.norm(),
                    r2: rep.r2.norm(),
                    lambda: rep.lambda_star,
                    k: rep.k,
                    mu: rep.mu,
                });
            }
        }
        GroupKind::Heis => {
            let base = parse_basepoint(basepoint, Complex64::new(0.0, 0.0))?;
            let lift = lift_heis(planar, base, force)?;
            forced = lift.forced;
            for p in &points {
                let rep = full_report(&lift, p.z, p.t, GroupKind::Heis)?;
                let res = rep
                    .r1
                    .norm()
                    .max(rep.r2.norm())
                    .max((rep.lambda_star - 1.0).abs());
                max_residual = max_residual.max(res);
                rows.push(LiftRow {
                    zeta: p.z,
                    psi: lift.phi(p.z)?,
                    f_i: lift.f_i(p.z, p.t),
                    f_3: lift.f_3(p.z, p.t),
                    r1: rep.r1.norm(),
                    r2: rep.r2.norm(),
                    lambda: rep.lambda_star,
                    k: rep.k,
                    mu: rep.mu,
                });
            }
        }
    }

    let pass = max_residual < tol && !forced;
    let text = match format {
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "command": "lift",
                "map": spec,
                "kind": if kind == GroupKind::Star { "star" } else { "heis" },
                "phase": phase,
                "tolerance": tol,
                "forced": forced,
                "rows": rows.iter().map(LiftRow::json).collect::<Vec<_>>(),
                "summary": {"max_residual": max_residual, "pass": pass},
            });
            serde_json::to_string_pretty(&doc).expect("report serialization")
        }
        Format::Csv => {
            let mut s = String::from(LiftRow::CSV_HEADER);
            for row in &rows {
                let _ = write!(s, "\n{}", row.csv());
            }
            s
        }
    };
    emit(out, &text)?;
    if !pass {
        eprintln!("lift: max residual {max_residual:e} (tolerance {tol:e}), forced = {forced}");
    }
    Ok(if pass { 0 } else { 1 })
}

/// Resolve a map spec to the star map to analyze: the closed-form lift when
/// the catalog has one, else the numeric lift of the planar source.
fn resolve_star_map(spec: &MapSpec) -> Result<(Arc<dyn StarMap>, GroupKind), Error> {
    let entry = spec.build()?;
    if let Some(lift) = entry.closed_form_lift.clone() {
        return Ok((lift, spec.target()));
    }
    let planar = entry
        .planar
        .clone()
        .ok_or_else(|| Error::DomainViolation(format!("map '{}' is not analyzable", entry.name)))?;
    match spec.target() {
        GroupKind::Star => Ok((
            Arc::new(lift_star(planar, LiftOpts::default())?),
            GroupKind::Star,
        )),
        GroupKind::Heis => Ok((
            Arc::new(lift_heis(planar, Complex64::new(0.0, 0.0), false)?),
            GroupKind::Heis,
        )),
    }
}

fn cmd_analyze(
    command: &str,
    map: &str,
    grid: Option<&str>,
    tol: f64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<u8, Error> {
    check_tol(tol)?;
    let spec = parse_map(map)?;
    let (star_map, kind) = resolve_star_map(&spec)?;
    let points = parse_grid(grid)?.points()?;

    let mut reports: Vec<ContactReport> = Vec::with_capacity(points.len());
    for p in &points {
        reports.push(full_report(star_map.as_ref(), p.z, p.t, kind)?);
    }
    let max_residual = reports
        .iter()
        .map(|r| r.r1.norm().max(r.r2.norm()))
        .fold(0.0f64, f64::max);
    let max_k = reports.iter().map(|r| r.k).fold(0.0f64, f64::max);
    let mu_sup = reports.iter().map(|r| r.mu.norm()).fold(0.0f64, f64::max);
    let k_bound = (max_k - 1.0) / (max_k + 1.0);
    let pass = max_residual < tol;

    let text = match format {
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "command": command,
                "map": spec,
                "kind": if kind == GroupKind::Star { "star" } else { "heis" },
                "tolerance": tol,
                "rows": reports.iter().map(ContactReport::json_record).collect::<Vec<_>>(),
                "summary": {
                    "max_residual": max_residual,
                    "max_K": max_k,
                    "mu_sup": mu_sup,
                    "k_bound": k_bound,
                    "mu_within_bound": mu_sup <= k_bound + tol,
                    "pass": pass,
                },
            });
            serde_json::to_string_pretty(&doc).expect("report serialization")
        }
        Format::Csv => {
            let mut s = String::from(ContactReport::csv_header());
            for r in &reports {
                let _ = write!(s, "\n{}", r.csv_row());
            }
            s
        }
    };
    emit(out, &text)?;
    if !pass {
        eprintln!("{command}: max residual {max_residual:e} exceeds tolerance {tol:e}");
    }
    Ok(if pass { 0 } else { 1 })
}

fn read_plane_curve(path: &PathBuf, domain: PlaneDomain) -> Result<PlaneCurve, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedCurveFile(format!("{}: {e}", path.display())))?;
    match parse_curve(&text)? {
        // a file whose samples violate the curve invariants is malformed input
        CurveData::Plane(samples) => PlaneCurve::from_samples(samples, domain)
            .map_err(|e| Error::MalformedCurveFile(format!("invalid samples: {e}"))),
        CurveData::Group(_) => Err(Error::MalformedCurveFile(
            "expected a plane curve (columns s,re,im), found a group curve".into(),
        )),
    }
}

fn cmd_curve_lift(
    input: &PathBuf,
    kind: Kind,
    basepoint: f64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<u8, Error> {
    let domain = match kind {
        Kind::Heis => PlaneDomain::Plane,
        Kind::Star => PlaneDomain::LeftHalfPlane,
    };
    let source = read_plane_curve(input, domain)?;
    let lifted = match kind {
        Kind::Heis => lift_plane_curve_heis(&source, basepoint)?,
        Kind::Star => lift_hyperbolic_curve(&source, basepoint)?,
    };
    let text = match format {
        Format::Csv => group_curve_to_csv(lifted.samples()),
        Format::Json => serde_json::to_string_pretty(&json!({
            "schema": 1,
            "command": "curve-lift",
            "kind": if kind == Kind::Star { "star" } else { "heis" },
            "basepoint": basepoint,
            "samples": group_curve_to_json(lifted.samples()),
        }))
        .expect("curve serialization"),
    };
    emit(out, &text)?;
    Ok(0)
}

fn cmd_holonomy(input: &PathBuf, kind: Kind, out: Option<PathBuf>) -> Result<u8, Error> {
    let domain = match kind {
        Kind::Heis => PlaneDomain::Plane,
        Kind::Star => PlaneDomain::LeftHalfPlane,
    };
    let source = read_plane_curve(input, domain)?;
    let rep = holonomy_closed(&source, kind.group())?;
    let doc = json!({
        "schema": 1,
        "command": "holonomy",
        "kind": if kind == Kind::Star { "star" } else { "heis" },
        "delta": rep.delta,
        "area_oracle": rep.area_oracle,
        "residual": rep.residual,
    });
    emit(
        out,
        &serde_json::to_string_pretty(&doc).expect("report serialization"),
    )?;
    Ok(0)
}

fn cmd_catalog_list(out: Option<PathBuf>) -> Result<u8, Error> {
    let doc = json!({
        "schema": 1,
        "command": "catalog-list",
        "entries": catalog_listing()
            .into_iter()
            .map(|(name, params)| json!({"name": name, "params": params}))
            .collect::<Vec<_>>(),
    });
    emit(
        out,
        &serde_json::to_string_pretty(&doc).expect("listing serialization"),
    )?;
    Ok(0)
}
