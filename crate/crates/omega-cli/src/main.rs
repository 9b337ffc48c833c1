//! Command-line front end: batch computation, verification runs, and
//! convergence tables over the holomorphic calculus library. All outputs
//! are machine-readable (JSON, CSV for tables) and deterministic given the
//! flags.
//!
//! Exit codes: 0 success, 2 user error (bad flags, specs, or inputs),
//! 3 numerical failure (contour breakdown, non-finite samples).

mod expr;
mod mapspec;

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use omega_core::calculus::{
    laplacian_config, laplacian_omega, metric_pullback, Domain, QuadratureConfig,
};
use omega_core::invariance::{
    config_invariance_residual, laplace_invariance_residual, ResidualReport, TestBattery,
};
use omega_core::models::{
    from_config, psi_minus, psi_minus_inv, psi_plus, psi_plus_inv, stereographic_pi,
    stereographic_s, SpherePoint,
};
use omega_core::riemann::{chordal_distance, ExtComplex, OmegaPoint};
use omega_core::sample;
use omega_core::schauder::{
    extract_coeffs, fourier_restrict, monomial_eval, series_eval, series_function, BasisTag,
    CoeffArray, DiagonalKind,
};

use mapspec::Model;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<omega_core::Error> for CliError {
    fn from(e: omega_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<expr::ParseError> for CliError {
    fn from(e: expr::ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "omega",
    version,
    about = "Holomorphic calculus on the complement of the complexified unit circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a function into basis coefficients by contour integration
    Expand(ExpandArgs),
    /// Evaluate a coefficient file or function spec at a point
    Eval(EvalArgs),
    /// Project a coefficient file onto its past or future part
    Project(ProjectArgs),
    /// Fourier modes of a disk or sphere diagonal restriction
    Restrict(RestrictArgs),
    /// Apply the invariant Laplacian at a point
    Laplacian(LaplacianArgs),
    /// Decide whether a map leaves the Laplacian invariant
    #[command(name = "invariance-check")]
    InvarianceCheck(InvarianceArgs),
    /// Check whether a map pulls the holomorphic metric back to itself
    #[command(name = "metric-check")]
    MetricCheck(MetricArgs),
    /// Transport a point between the equivalent models
    Transform(TransformArgs),
    /// Truncation-error table over increasing expansion orders
    Convergence(ConvergenceArgs),
}

#[derive(Args)]
struct QuadFlags {
    /// Contour radius for derivative circles
    #[arg(long, default_value_t = 0.25)]
    radius: f64,
    /// Samples per contour circle
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Radius cap factor relative to the distance to the singular set
    #[arg(long, default_value_t = 0.5)]
    singular_margin: f64,
}

impl QuadFlags {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            radius: self.radius,
            samples: self.samples,
            singular_margin: self.singular_margin,
        }
    }
}

#[derive(Args)]
struct ExpandArgs {
    /// Function spec, e.g. "exp(z*w/(1-z*w))" or "f[2,1]"
    #[arg(long)]
    input: String,
    /// Truncation order N
    #[arg(long)]
    order: usize,
    /// Samples per contour circle (default max(2N+2, 32))
    #[arg(long)]
    samples: Option<usize>,
    /// Contour radius (any positive value; the integrands are entire)
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Coefficient file to evaluate
    #[arg(long, conflicts_with = "input")]
    coeffs: Option<PathBuf>,
    /// Function spec to evaluate
    #[arg(long)]
    input: Option<String>,
    /// z coordinate, e.g. "0.3+0.4i" or "inf"
    #[arg(long)]
    z: String,
    /// w coordinate
    #[arg(long)]
    w: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    coeffs: PathBuf,
    /// Which part to keep: the future (p >= q) or the past (p < q)
    #[arg(long, value_enum)]
    part: ProjectionPart,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectionPart {
    Future,
    Past,
}

#[derive(Args)]
struct RestrictArgs {
    /// Function spec (alternative to --coeffs)
    #[arg(long)]
    input: Option<String>,
    #[arg(long, conflicts_with = "input")]
    coeffs: Option<PathBuf>,
    /// disk: t -> f(r e^{it}, r e^{-it}); sphere: t -> f(r e^{it}, -r e^{-it})
    #[arg(long, value_enum)]
    diagonal: DiagonalArg,
    /// Circle radius (disk restriction needs r < 1)
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Uniform samples on the circle
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagonalArg {
    Disk,
    Sphere,
}

#[derive(Args)]
struct LaplacianArgs {
    /// Function spec
    #[arg(long)]
    input: String,
    #[arg(long)]
    z: String,
    #[arg(long)]
    w: String,
    /// omega: 4(1-zw)^2 dzdw; config: -4(z-w)^2 dzdw
    #[arg(long, value_enum, default_value_t = ModelArg::Omega)]
    model: ModelArg,
    #[command(flatten)]
    quad: QuadFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum ModelArg {
    Omega,
    Config,
}

impl ModelArg {
    fn model(self) -> Model {
        match self {
            ModelArg::Omega => Model::Omega,
            ModelArg::Config => Model::Config,
        }
    }
}

#[derive(Args)]
struct InvarianceArgs {
    /// Map spec (JSON, "identity", or "shear:g=id")
    #[arg(long)]
    map: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Omega)]
    model: ModelArg,
    /// Accept threshold on the max residual
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    /// Grid points per sweep
    #[arg(long, default_value_t = 25)]
    grid_points: usize,
    /// Seed for the sample grid
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    quad: QuadFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricArgs {
    /// Map spec on the omega model
    #[arg(long)]
    map: String,
    /// Sample points
    #[arg(long, default_value_t = 10)]
    points: usize,
    /// Threshold on the dz dw coefficient deviation
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    /// Seed for the sample points
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    quad: QuadFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq, Debug)]
enum PointModel {
    Omega,
    Config,
    Sphere,
    /// The entire-plane chart through Psi+
    C2Plus,
    /// The entire-plane chart through Psi-
    C2Minus,
}

impl PointModel {
    fn name(self) -> &'static str {
        match self {
            PointModel::Omega => "omega",
            PointModel::Config => "config",
            PointModel::Sphere => "sphere",
            PointModel::C2Plus => "c2-plus",
            PointModel::C2Minus => "c2-minus",
        }
    }
}

#[derive(Args)]
struct TransformArgs {
    /// Point JSON: {"z": C, "w": C} with C = {"re","im"} or "inf";
    /// sphere points use {"z1": C, "z2": C, "z3": C}
    #[arg(long)]
    point: String,
    #[arg(long, value_enum)]
    from: PointModel,
    #[arg(long, value_enum)]
    to: PointModel,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Function spec
    #[arg(long)]
    input: String,
    /// Comma-separated truncation orders, e.g. "2,4,8,16"
    #[arg(long)]
    orders: String,
    /// Samples per contour circle (default max(2N+2, 32) per order)
    #[arg(long)]
    samples: Option<usize>,
    /// Extraction contour radius
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// CSV output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Expand(args) => cmd_expand(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Project(args) => cmd_project(args),
        Command::Restrict(args) => cmd_restrict(args),
        Command::Laplacian(args) => cmd_laplacian(args),
        Command::InvarianceCheck(args) => cmd_invariance_check(args),
        Command::MetricCheck(args) => cmd_metric_check(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Convergence(args) => cmd_convergence(args),
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn write_json(out: Option<&PathBuf>, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("JSON serialization");
    write_output(out, &text)
}

fn read_coeffs(path: &PathBuf) -> Result<CoeffArray, CliError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn complex_json(v: Complex64) -> Value {
    json!({"re": v.re, "im": v.im})
}

fn ext_json(v: ExtComplex) -> Value {
    serde_json::to_value(v).expect("ExtComplex serialization")
}

fn parse_point(z: &str, w: &str) -> Result<(ExtComplex, ExtComplex), CliError> {
    Ok((expr::parse_point_literal(z)?, expr::parse_point_literal(w)?))
}

fn cmd_expand(args: ExpandArgs) -> Result<(), CliError> {
    let f = expr::parse_fn_spec(&args.input, Domain::Omega)?;
    let samples = args.samples.unwrap_or((2 * args.order + 2).max(32));
    let coeffs = extract_coeffs(&f, args.order, samples, args.radius)?;
    let text = serde_json::to_string_pretty(&coeffs).expect("coefficient serialization");
    write_output(args.out.as_ref(), &text)
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let (z, w) = parse_point(&args.z, &args.w)?;
    let value = match (&args.coeffs, &args.input) {
        (Some(path), None) => {
            let coeffs = read_coeffs(path)?;
            match coeffs.basis() {
                BasisTag::Schauder => series_eval(&coeffs, z, w)?,
                BasisTag::Monomial => {
                    let (Some(u), Some(v)) = (z.as_finite(), w.as_finite()) else {
                        return Err(CliError::Usage(
                            "monomial tables are entire functions; evaluation needs finite coordinates".into(),
                        ));
                    };
                    monomial_eval(&coeffs, u, v)?
                }
            }
        }
        (None, Some(spec)) => {
            let f = expr::parse_fn_spec(spec, Domain::Omega)?;
            let v = f.eval(z, w);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(CliError::Numerical(format!(
                    "function value is not finite at ({z}, {w})"
                )));
            }
            v
        }
        _ => {
            return Err(CliError::Usage(
                "eval needs exactly one of --coeffs or --input".into(),
            ))
        }
    };
    write_json(args.out.as_ref(), &json!({"value": complex_json(value)}))
}

fn cmd_project(args: ProjectArgs) -> Result<(), CliError> {
    let coeffs = read_coeffs(&args.coeffs)?;
    let projected = match args.part {
        ProjectionPart::Future => coeffs.project_future(),
        ProjectionPart::Past => coeffs.project_past(),
    };
    let text = serde_json::to_string_pretty(&projected).expect("coefficient serialization");
    write_output(args.out.as_ref(), &text)
}

fn cmd_restrict(args: RestrictArgs) -> Result<(), CliError> {
    let f = match (&args.coeffs, &args.input) {
        (Some(path), None) => {
            let coeffs = read_coeffs(path)?;
            if coeffs.basis() != BasisTag::Schauder {
                return Err(CliError::Usage(
                    "restriction needs a schauder-basis coefficient file".into(),
                ));
            }
            series_function(coeffs)
        }
        (None, Some(spec)) => expr::parse_fn_spec(spec, Domain::Omega)?,
        _ => {
            return Err(CliError::Usage(
                "restrict needs exactly one of --coeffs or --input".into(),
            ))
        }
    };
    let kind = match args.diagonal {
        DiagonalArg::Disk => DiagonalKind::Disk,
        DiagonalArg::Sphere => DiagonalKind::Sphere,
    };
    let modes = fourier_restrict(&f, kind, args.radius, args.samples)?;
    let mode_rows: Vec<Value> = modes
        .iter()
        .map(|(n, c)| json!({"n": n, "re": c.re, "im": c.im}))
        .collect();
    let diagonal = match args.diagonal {
        DiagonalArg::Disk => "disk",
        DiagonalArg::Sphere => "sphere",
    };
    write_json(
        args.out.as_ref(),
        &json!({
            "diagonal": diagonal,
            "radius": args.radius,
            "samples": args.samples,
            "modes": mode_rows,
        }),
    )
}

fn cmd_laplacian(args: LaplacianArgs) -> Result<(), CliError> {
    let (z, w) = parse_point(&args.z, &args.w)?;
    let (Some(z), Some(w)) = (z.as_finite(), w.as_finite()) else {
        return Err(CliError::Usage(
            "the Laplacian is evaluated in the finite charts; coordinates must be finite".into(),
        ));
    };
    let cfg = args.quad.config();
    let value = match args.model {
        ModelArg::Omega => {
            let f = expr::parse_fn_spec(&args.input, Domain::Omega)?;
            laplacian_omega(&f, z, w, &cfg)?
        }
        ModelArg::Config => {
            let f = expr::parse_fn_spec(&args.input, Domain::ConfigG)?;
            laplacian_config(&f, z, w, &cfg)?
        }
    };
    write_json(args.out.as_ref(), &json!({"value": complex_json(value)}))
}

fn report_json(report: &ResidualReport) -> Vec<Value> {
    report
        .per_function
        .iter()
        .map(|f| {
            json!({
                "label": f.label,
                "max_residual": f.max_residual,
                "worst_point": {
                    "z": complex_json(f.worst_point.0),
                    "w": complex_json(f.worst_point.1),
                },
            })
        })
        .collect()
}

fn cmd_invariance_check(args: InvarianceArgs) -> Result<(), CliError> {
    let model = args.model.model();
    let map = mapspec::parse_map_spec(&args.map, model)?;
    let cfg = args.quad.config();
    let report = match model {
        Model::Omega => {
            let battery = TestBattery::omega_default();
            let grid = sample::seeded_omega_grid(args.seed, args.grid_points);
            laplace_invariance_residual(&map, &battery, &grid, &cfg)?
        }
        Model::Config => {
            let battery = TestBattery::config_default();
            let grid = sample::seeded_config_grid(args.seed, args.grid_points);
            config_invariance_residual(&map, &battery, &grid, &cfg)?
        }
    };
    let verdict = if report.max_residual < args.tolerance {
        "mobius"
    } else {
        "not_mobius"
    };
    write_json(
        args.out.as_ref(),
        &json!({
            "model": model.name(),
            "map": map.label(),
            "tolerance": args.tolerance,
            "max_residual": report.max_residual,
            "verdict": verdict,
            "per_function": report_json(&report),
        }),
    )
}

fn cmd_metric_check(args: MetricArgs) -> Result<(), CliError> {
    let map = mapspec::parse_map_spec(&args.map, Model::Omega)?;
    let cfg = args.quad.config();
    let points = sample::seeded_omega_grid(args.seed, args.points);
    let mut max_czz: f64 = 0.0;
    let mut max_cww: f64 = 0.0;
    let mut max_czw_dev: f64 = 0.0;
    for &(z0, w0) in &points {
        let g = metric_pullback(&map, z0, w0, &cfg)?;
        let reference = (Complex64::new(1.0, 0.0) - z0 * w0).powi(2).inv();
        max_czz = max_czz.max(g.c_zz.norm());
        max_cww = max_cww.max(g.c_ww.norm());
        max_czw_dev = max_czw_dev.max((g.c_zw - reference).norm());
    }
    let isometry = max_czz < args.tolerance && max_cww < args.tolerance && max_czw_dev < args.tolerance;
    write_json(
        args.out.as_ref(),
        &json!({
            "map": map.label(),
            "points": args.points,
            "tolerance": args.tolerance,
            "max_czz": max_czz,
            "max_cww": max_cww,
            "max_czw_deviation": max_czw_dev,
            "isometry": isometry,
        }),
    )
}

fn point_from_json(text: &str, model: PointModel) -> Result<OmegaPoint, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("point is not valid JSON: {e}")))?;
    let coord = |key: &str| -> Result<ExtComplex, CliError> {
        let field = value
            .get(key)
            .ok_or_else(|| CliError::Usage(format!("point is missing the field {key:?}")))?;
        serde_json::from_value(field.clone())
            .map_err(|e| CliError::Usage(format!("field {key:?}: {e}")))
    };
    match model {
        PointModel::Omega => Ok(OmegaPoint::new(coord("z")?, coord("w")?)?),
        PointModel::Config => Ok(from_config(coord("z")?, coord("w")?)?),
        PointModel::Sphere => {
            let finite = |key: &str| -> Result<Complex64, CliError> {
                coord(key)?.as_finite().ok_or_else(|| {
                    CliError::Usage(format!("sphere coordinate {key:?} must be finite"))
                })
            };
            let s = SpherePoint::new(finite("z1")?, finite("z2")?, finite("z3")?)?;
            Ok(stereographic_pi(&s)?)
        }
        PointModel::C2Plus | PointModel::C2Minus => {
            let u = coord("z")?
                .as_finite()
                .ok_or_else(|| CliError::Usage("plane coordinates must be finite".into()))?;
            let v = coord("w")?
                .as_finite()
                .ok_or_else(|| CliError::Usage("plane coordinates must be finite".into()))?;
            Ok(if model == PointModel::C2Plus {
                psi_plus_inv(u, v)?
            } else {
                psi_minus_inv(u, v)?
            })
        }
    }
}

fn point_to_json(p: &OmegaPoint, model: PointModel) -> Result<Value, CliError> {
    Ok(match model {
        PointModel::Omega => json!({"z": ext_json(p.z()), "w": ext_json(p.w())}),
        PointModel::Config => {
            let (z, w) = omega_core::models::to_config(p);
            json!({"z": ext_json(z), "w": ext_json(w)})
        }
        PointModel::Sphere => {
            let s = stereographic_s(p);
            let (z1, z2, z3) = s.coords();
            json!({"z1": complex_json(z1), "z2": complex_json(z2), "z3": complex_json(z3)})
        }
        PointModel::C2Plus => {
            let (u, v) = psi_plus(p)?;
            json!({"z": complex_json(u), "w": complex_json(v)})
        }
        PointModel::C2Minus => {
            let (u, v) = psi_minus(p)?;
            json!({"z": complex_json(u), "w": complex_json(v)})
        }
    })
}

fn cmd_transform(args: TransformArgs) -> Result<(), CliError> {
    let p = point_from_json(&args.point, args.from)?;
    let target = point_to_json(&p, args.to)?;
    // self-test: reparse the emitted point and compare on Omega
    let round_trip_ok = point_from_json(&target.to_string(), args.to)
        .map(|back| {
            chordal_distance(back.z(), p.z()) < 1e-9 && chordal_distance(back.w(), p.w()) < 1e-9
        })
        .unwrap_or(false);
    write_json(
        args.out.as_ref(),
        &json!({
            "from": args.from.name(),
            "to": args.to.name(),
            "point": target,
            "round_trip_ok": round_trip_ok,
        }),
    )
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<(), CliError> {
    let f = expr::parse_fn_spec(&args.input, Domain::Omega)?;
    let mut orders = Vec::new();
    for part in args.orders.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad order {part:?} in --orders")))?;
        orders.push(n);
    }
    if orders.is_empty() {
        return Err(CliError::Usage("--orders needs at least one order".into()));
    }

    // fixed 20 x 20 product grid in the 0.6-bidisk
    let zs = sample::spiral_disk(Complex64::default(), 0.6, 20, 0.0);
    let ws = sample::spiral_disk(Complex64::default(), 0.6, 20, 1.0);
    let mut reference = Vec::with_capacity(zs.len() * ws.len());
    for &z in &zs {
        for &w in &ws {
            let v = f.eval_finite(z, w);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(CliError::Numerical(format!(
                    "input function is not finite at ({z}, {w})"
                )));
            }
            reference.push((z, w, v));
        }
    }

    let mut csv = String::from("N,max_error\n");
    for &n in &orders {
        let samples = args.samples.unwrap_or(0).max(2 * n + 2).max(32);
        let coeffs = extract_coeffs(&f, n, samples, args.radius)?;
        let mut max_err: f64 = 0.0;
        for &(z, w, v) in &reference {
            let approx = series_eval(&coeffs, ExtComplex::Finite(z), ExtComplex::Finite(w))?;
            max_err = max_err.max((approx - v).norm());
        }
        csv.push_str(&format!("{n},{max_err:e}\n"));
    }
    write_output(args.out.as_ref(), csv.trim_end())
}
