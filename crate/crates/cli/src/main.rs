//! `sltwo` command-line front end.
//!
//! Reports go to stdout as JSON; bulk data (OBJ, CSV, curve files) to
//! `--out` or stdout. Library errors exit 1 with `{"error", "message"}` on
//! stderr.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sltwo::annulus::{
    boundary_gap, douglas_check_with, douglas_sweep, douglas_threshold, write_sweep_csv, AnnulusSpec, AreaOptions,
};
use sltwo::boundary::{
    check_fold_hypotheses, check_short_arc_hypothesis, jenkins_serrin_check_with, parse_curve, tallness,
    transport_boundary, write_curve, Direction, IdealBoundaryCurve, IdealPolygon,
};
use sltwo::geometry::{Model, Tau};
use sltwo::minimality::{verify_graph, VerifyOptions};
use sltwo::plateau::{max_node_error, solve, GridProblem, SolveOptions};
use sltwo::surfaces::{as_graph, surface_mesh, Family, InvariantSurface, Sheet};
use sltwo::{Error, Result};

use config::Config;

#[derive(Parser)]
#[command(name = "sltwo", version, about = "Minimal surfaces in E(-1, tau): meshes, verification, Douglas sweeps, tallness, Plateau solves")]
struct Cli {
    /// TOML file with defaults for any flag (flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for the parallel code paths; 0 or absent runs serially.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant minimal surfaces.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Annulus area comparison.
    #[command(subcommand)]
    Annulus(AnnulusCmd),
    /// Curves in the vertical ideal boundary.
    #[command(subcommand)]
    Boundary(BoundaryCmd),
    /// Ideal polygons and the Jenkins–Serrin conditions.
    #[command(subcommand)]
    Js(JsCmd),
    /// Dirichlet problem for the minimal-graph equation on a rectangle.
    Solve(SolveArgs),
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Triangle mesh as Wavefront OBJ.
    Mesh(MeshArgs),
    /// PDE residual and mean curvature at sample points, as JSON.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum AnnulusCmd {
    /// Douglas margins along ρ = ratio·ρ̄, as CSV.
    Sweep(SweepArgs),
    /// Areas, margin and boundary gap for one annulus.
    Check(CheckArgs),
}

#[derive(Subcommand)]
enum BoundaryCmd {
    /// Whether the vertical height stays above √(1+4τ²)π.
    Tall(CurveArgs),
    /// Fold witnesses (half-space curves only).
    Folds(CurveArgs),
    /// Arcs where the height drops below √(1+4τ²)π.
    ShortArc(CurveArgs),
    /// Move a curve between the half-space and cylinder models.
    Transport(TransportArgs),
}

#[derive(Subcommand)]
enum JsCmd {
    /// α, β, γ and the inscribed-polygon conditions.
    Check(PolygonArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModelArg {
    Half,
    Cyl,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Half => Model::HalfSpace,
            ModelArg::Cyl => Model::Cylinder,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SheetArg {
    Plus,
    Minus,
    /// both sheets glued along the fold
    Both,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// slab-bigraph, tilted, fan, catenoid or umbrella-limit
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum)]
    sheet: Option<SheetArg>,
    /// grid lines per sheet and direction
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum)]
    sheet: Option<SheetArg>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// write the report here instead of stdout
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// a:b:n, n equally spaced necks from a to b
    #[arg(long)]
    rho_bar_range: Option<String>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    rho_bar: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
}

#[derive(Args)]
struct TransportArgs {
    #[arg(long)]
    curve: PathBuf,
    /// half2cyl or cyl2half
    #[arg(long)]
    dir: String,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// samples per input edge
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolygonArgs {
    #[arg(long)]
    polygon: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    /// node dump (CSV)
    #[arg(long)]
    out: Option<PathBuf>,
    /// graph mesh (OBJ)
    #[arg(long)]
    obj: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let threads = cli.parallel.or(cfg.parallel).unwrap_or(0);
    if threads == 0 {
        return dispatch(cli.command, &cfg, false);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::BadParameter(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| dispatch(cli.command, &cfg, true))
}

fn dispatch(cmd: Command, cfg: &Config, parallel: bool) -> Result<()> {
    match cmd {
        Command::Surface(SurfaceCmd::Mesh(a)) => surface_mesh_cmd(a, cfg),
        Command::Surface(SurfaceCmd::Verify(a)) => surface_verify(a, cfg, parallel),
        Command::Annulus(AnnulusCmd::Sweep(a)) => annulus_sweep(a, cfg, parallel),
        Command::Annulus(AnnulusCmd::Check(a)) => annulus_check(a, cfg, parallel),
        Command::Boundary(BoundaryCmd::Tall(a)) => {
            let (curve, tau) = load_curve(&a, cfg)?;
            print_json(&tallness(&curve, tau))
        }
        Command::Boundary(BoundaryCmd::Folds(a)) => {
            let (curve, tau) = load_curve(&a, cfg)?;
            print_json(&check_fold_hypotheses(&curve, tau)?)
        }
        Command::Boundary(BoundaryCmd::ShortArc(a)) => {
            let (curve, tau) = load_curve(&a, cfg)?;
            print_json(&check_short_arc_hypothesis(&curve, tau))
        }
        Command::Boundary(BoundaryCmd::Transport(a)) => boundary_transport(a, cfg),
        Command::Js(JsCmd::Check(a)) => {
            let p = load_polygon(&a.polygon)?;
            print_json(&jenkins_serrin_check_with(&p, parallel)?)
        }
        Command::Solve(a) => solve_cmd(a, cfg, parallel),
    }
}

fn tau_of(flag: Option<f64>, section: Option<f64>, cfg: &Config) -> Result<Tau> {
    Tau::new(flag.or(section).or(cfg.tau).unwrap_or(0.5))
}

fn family_of(a: &FamilyArgs, cfg: &Config) -> Result<(Family, Tau)> {
    let s = &cfg.surface;
    let name = a.family.clone().or_else(|| s.family.clone()).ok_or_else(|| Error::BadParameter("--family is required".into()))?;
    let need = |flag: Option<f64>, conf: Option<f64>, what: &str| {
        flag.or(conf).ok_or_else(|| Error::BadParameter(format!("family {name} needs --{what}")))
    };
    let family = match name.as_str() {
        "slab-bigraph" | "slab" => Family::SlabBigraph { d: need(a.d, s.d, "d")? },
        "tilted" => Family::Tilted { d: need(a.d, s.d, "d")?, l: a.l.or(s.l).unwrap_or(0.0) },
        "fan" => Family::Fan { c: need(a.c, s.c, "c")? },
        "catenoid" => Family::Catenoid { c: need(a.c, s.c, "c")? },
        "umbrella-limit" | "umbrella" => Family::UmbrellaLimit { lambda: a.lambda.or(s.lambda).unwrap_or(0.0) },
        other => {
            return Err(Error::BadParameter(format!(
                "unknown family '{other}' (expected slab-bigraph, tilted, fan, catenoid or umbrella-limit)"
            )))
        }
    };
    family.validate()?;
    Ok((family, tau_of(a.tau, s.tau, cfg)?))
}

fn sheet_of(flag: Option<SheetArg>, conf: Option<&str>, default: SheetArg) -> Result<SheetArg> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match conf {
        None => Ok(default),
        Some(name) => SheetArg::from_str(name, true).map_err(|_| Error::BadParameter(format!("unknown sheet '{name}'"))),
    }
}

fn surface_mesh_cmd(a: MeshArgs, cfg: &Config) -> Result<()> {
    let (family, tau) = family_of(&a.family, cfg)?;
    let s = &cfg.surface;
    let model = match a.model {
        Some(m) => m.into(),
        None => config::model(s.model.as_deref())?.unwrap_or(Model::HalfSpace),
    };
    let sheet = sheet_of(a.sheet, s.sheet.as_deref(), SheetArg::Both)?;
    let n = a.resolution.or(s.resolution).unwrap_or(64);
    let surface = InvariantSurface::new(family, if sheet == SheetArg::Minus { Sheet::Minus } else { Sheet::Plus }, tau)?;
    let mesh = surface_mesh(&surface, model, n, sheet == SheetArg::Both)?;
    let mut buf = Vec::new();
    writeln!(buf, "# {} in the {} model", surface.label(), model.name())?;
    mesh.write_obj(&mut buf)?;
    emit(a.out.as_deref(), &buf)
}

fn surface_verify(a: VerifyArgs, cfg: &Config, parallel: bool) -> Result<()> {
    let (family, tau) = family_of(&a.family, cfg)?;
    let s = &cfg.surface;
    let sheet = match sheet_of(a.sheet, s.sheet.as_deref(), SheetArg::Plus)? {
        SheetArg::Minus => Sheet::Minus,
        _ => Sheet::Plus,
    };
    let surface = InvariantSurface::new(family, sheet, tau)?;
    let samples = a.samples.or(s.samples).unwrap_or(200);
    let tol = a.tol.or(s.tol).unwrap_or(1e-6);
    let report = verify_graph(&as_graph(&surface)?, tau, samples, tol, &VerifyOptions { parallel, ..Default::default() })?;
    let text = pretty(&report)?;
    match &a.json {
        Some(p) => write_file(p, text.as_bytes()),
        None => emit(None, text.as_bytes()),
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::BadParameter(format!("range '{s}' is not of the form a:b:n"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect())
}

fn annulus_sweep(a: SweepArgs, cfg: &Config, parallel: bool) -> Result<()> {
    let s = &cfg.annulus;
    let tau = tau_of(a.tau, s.tau, cfg)?;
    let ratio = a.ratio.or(s.ratio).unwrap_or(1.25);
    let range = a.rho_bar_range.or_else(|| s.rho_bar_range.clone()).unwrap_or_else(|| "0.25:8:32".into());
    let rho_bars = parse_range(&range)?;
    let rows = douglas_sweep(&rho_bars, ratio, tau, &AreaOptions { parallel })?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    match &a.out {
        Some(p) => {
            write_file(p, &buf)?;
            let threshold = douglas_threshold(&rows, ratio, tau, 1e-10)?;
            print_json(&json!({ "rows": rows.len(), "threshold": threshold, "out": p }))
        }
        None => emit(None, &buf),
    }
}

fn annulus_check(a: CheckArgs, cfg: &Config, parallel: bool) -> Result<()> {
    let spec = AnnulusSpec::new(a.rho_bar, a.rho, tau_of(a.tau, cfg.annulus.tau, cfg)?)?;
    let d = douglas_check_with(&spec, &AreaOptions { parallel })?;
    let gap = boundary_gap(&spec)?;
    print_json(&json!({ "spec": spec, "douglas": d, "gap": gap, "gap_bound": spec.tau.threshold() }))
}

fn load_curve(a: &CurveArgs, cfg: &Config) -> Result<(IdealBoundaryCurve, Tau)> {
    let curve = parse_curve(&read_file(&a.curve)?)?;
    Ok((curve, tau_of(a.tau, cfg.boundary.tau, cfg)?))
}

fn boundary_transport(a: TransportArgs, cfg: &Config) -> Result<()> {
    let curve = parse_curve(&read_file(&a.curve)?)?;
    let dir: Direction = a.dir.parse()?;
    let tau = tau_of(a.tau, cfg.boundary.tau, cfg)?;
    let resolution = a.resolution.or(cfg.boundary.resolution).unwrap_or(8);
    let moved = transport_boundary(&curve, dir, tau, resolution)?;
    emit(a.out.as_deref(), write_curve(&moved).as_bytes())
}

fn load_polygon(path: &Path) -> Result<IdealPolygon> {
    let text = read_file(path)?;
    let p: IdealPolygon = toml::from_str(&text).map_err(|e| Error::Parse {
        line: e.span().map(|sp| text[..sp.start].matches('\n').count() + 1).unwrap_or(0),
        message: e.message().to_string(),
    })?;
    IdealPolygon::new(p.thetas, p.horocycles, p.origin)
}

#[derive(Serialize)]
struct SolveSummary {
    nx: usize,
    ny: usize,
    iterations: usize,
    max_residual: f64,
    residual_trace: Vec<f64>,
    /// against the attached exact solution, when the boundary is a family or plane
    max_node_error: Option<f64>,
}

fn solve_cmd(a: SolveArgs, cfg: &Config, parallel: bool) -> Result<()> {
    let p = GridProblem::from_toml_str(&read_file(&a.problem)?)?;
    let d = SolveOptions::default();
    let opts = SolveOptions {
        tol: a.tol.or(cfg.solve.tol).unwrap_or(d.tol),
        max_iter: a.max_iter.or(cfg.solve.max_iter).unwrap_or(d.max_iter),
        parallel,
    };
    let sol = solve(&p, &opts)?;
    let mut csv = Vec::new();
    sol.write_csv(&mut csv)?;
    if let Some(path) = &a.obj {
        let mut obj = Vec::new();
        sol.write_obj(&mut obj)?;
        write_file(path, &obj)?;
    }
    let err = match p.exact()? {
        Some(_) => Some(max_node_error(&p, &sol)?),
        None => None,
    };
    let summary = SolveSummary {
        nx: sol.nx,
        ny: sol.ny,
        iterations: sol.iterations,
        max_residual: sol.max_residual,
        residual_trace: sol.residual_trace.clone(),
        max_node_error: err,
    };
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            print_json(&summary)
        }
        None => emit(None, &csv),
    }
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    emit(None, pretty(v)?.as_bytes())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => write_file(p, bytes),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(bytes)?;
            o.flush()?;
            Ok(())
        }
    }
}

fn read_file(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn write_file(p: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:2:3").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_range("0.5:9:1").unwrap(), vec![0.5]);
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("a:2:3").is_err());
        assert!(parse_range("1:2:0").is_err());
    }
}
