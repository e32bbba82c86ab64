//! Command-line front end. Every number printed comes from the library API.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 degenerate input,
//! 3 self-check failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curvature::{curvature_spectral, curvature_transported, CurvatureTwoForm, Level};
use crate::degeneracy::monopole_sphere;
use crate::error::Error;
use crate::holonomy::{loop_phase, phase_sum_rule_check, sphere_flux, surface_flux, LoopPath, SurfacePatch};
use crate::spectrum::{classify, diagonalizer, eigenvalues, DEFAULT_TOL};
use crate::su3::{Mat8, OctetVector, SQRT3};
use crate::tensor::{
    curvature_from_parts, curvature_parts, decouplet_strength, octet_coefficients, octet_prefactor,
    project_irreducible, to_tensor_components, Sym3,
};

pub const SCHEMA: &str = "su3holo/1";

/// Fixed CSV header of `sweep`.
pub const SWEEP_COLUMNS: &str = "index,xi1,xi2,xi3,xi4,xi5,xi6,xi7,xi8,class,phi,e1,e2,e3,e12,e23,v12_level1,v45_level1,v67_level2,route_deviation";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Degenerate(String),
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Degenerate(_) => 2,
            Self::CheckFailed(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Degenerate(m) | Self::CheckFailed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateInput { .. } => Self::Degenerate(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "su3holo", version, about = "Spectra, curvature and geometric phases of three-level Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Route {
    Spectral,
    Transported,
    Parts,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degeneracy class, angle and gaps.
    Classify {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        xi: OctetVector,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Eigenvalues, gaps, rest frame and diagonalizer.
    Spectrum {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        xi: OctetVector,
        #[command(flatten)]
        out: Output,
    },
    /// Curvature coefficients of one level.
    Curvature {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        xi: OctetVector,
        #[arg(long, value_parser = parse_level)]
        level: Level,
        #[arg(long, value_enum, default_value_t = Route::Spectral)]
        route: Route,
        #[command(flatten)]
        out: Output,
    },
    /// Irreducible parts of the curvature of one level.
    Decompose {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        xi: OctetVector,
        #[arg(long, value_parser = parse_level)]
        level: Level,
        #[command(flatten)]
        out: Output,
    },
    /// Geometric phase along a circle `center + radius (cos t u + sin t w)`.
    LoopPhase {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        center: OctetVector,
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        axis_u: OctetVector,
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        axis_w: OctetVector,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Omit for all three levels and their sum.
        #[arg(long, value_parser = parse_level)]
        level: Option<Level>,
        #[command(flatten)]
        out: Output,
    },
    /// Flux through a spherical cap and the phase of its boundary.
    SurfaceFlux {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true)]
        center: OctetVector,
        /// Three orthonormal 8-vectors separated by ';'.
        #[arg(long, value_parser = parse_frame, allow_hyphen_values = true)]
        frame: [OctetVector; 3],
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        theta_max: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, value_parser = parse_level)]
        level: Level,
        #[command(flatten)]
        out: Output,
    },
    /// Flux through a small sphere around a point of the upper cone.
    Monopole {
        #[arg(long, value_parser = parse_octet, allow_hyphen_values = true, default_value = "0,0,0,0,0,0,0,1")]
        direction: OctetVector,
        #[arg(long, default_value_t = 1e-3)]
        radius: f64,
        /// Convergence tolerance of the flux under refinement.
        #[arg(long, default_value_t = 2e-4 * std::f64::consts::PI)]
        tol: f64,
        /// Centre displacement in the unfolding directions, three numbers.
        #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, default_value = "0,0,0")]
        offset: [f64; 3],
        #[arg(long, value_parser = parse_level)]
        level: Level,
        #[command(flatten)]
        out: Output,
    },
    /// Spectra and curvature over many points, written as CSV.
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Run the invariant suite.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run a JSON job descriptor.
    Job {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepKind::Random)]
    #[serde(default = "default_kind")]
    kind: SweepKind,
    #[arg(long, default_value_t = 100)]
    #[serde(default = "default_count")]
    count: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    #[serde(default)]
    threads: Option<usize>,
    /// Smallest and largest offset for the `approach` kind.
    #[arg(long, default_value_t = 1e-6)]
    #[serde(default = "default_delta_min")]
    delta_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    #[serde(default = "default_delta_max")]
    delta_max: f64,
}

fn default_kind() -> SweepKind {
    SweepKind::Random
}
fn default_count() -> usize {
    100
}
fn default_delta_min() -> f64 {
    1e-6
}
fn default_delta_max() -> f64 {
    1e-1
}

/// `random`: standard normal points. `approach`: `e8 + delta e3` with
/// geometrically spaced `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SweepKind {
    Random,
    Approach,
}

fn parse_numbers(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect()
}

fn parse_octet(s: &str) -> std::result::Result<OctetVector, String> {
    let v = parse_numbers(s)?;
    octet_from_slice(&v)
}

fn octet_from_slice(v: &[f64]) -> std::result::Result<OctetVector, String> {
    let arr: [f64; 8] = v
        .try_into()
        .map_err(|_| format!("expected 8 comma-separated numbers, got {}", v.len()))?;
    Ok(OctetVector::new(arr))
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let v = parse_numbers(s)?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected 3 numbers, got {}", v.len()))
}

fn parse_frame(s: &str) -> std::result::Result<[OctetVector; 3], String> {
    let parts: Vec<OctetVector> = s.split(';').map(parse_octet).collect::<std::result::Result<_, _>>()?;
    parts.try_into().map_err(|v: Vec<_>| format!("expected 3 vectors, got {}", v.len()))
}

fn parse_level(s: &str) -> std::result::Result<Level, String> {
    let a: usize = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    Level::new(a).map_err(|e| e.to_string())
}

fn matrix_rows(m: &Mat8) -> Vec<Vec<f64>> {
    (0..8).map(|r| (0..8).map(|s| m[(r, s)]).collect()).collect()
}

fn complex_pair(z: num_complex::Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Independent components `[re, im]` of a symmetric 3-index array, keyed
/// by one-based sorted indices.
fn sym3_json(w: &Sym3) -> Value {
    let mut map = serde_json::Map::new();
    for a in 0..3 {
        for b in a..3 {
            for c in b..3 {
                map.insert(format!("{}{}{}", a + 1, b + 1, c + 1), json!(complex_pair(w[a][b][c])));
            }
        }
    }
    Value::Object(map)
}

fn spectrum_json(xi: &OctetVector, tol: f64) -> Value {
    let s = eigenvalues(xi);
    json!({
        "class": classify(xi, tol),
        "phi": s.phi,
        "gaps": {"e12": s.e12, "e23": s.e23},
    })
}

fn emit(text: &str, out: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}"))),
    }
}

fn emit_json(v: &Value, out: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values are finite or null");
    text.push('\n');
    emit(&text, out, stdout)
}

fn curvature_route(xi: &OctetVector, level: Level, route: Route) -> CliResult<Value> {
    let pick = |r: Route| -> CliResult<CurvatureTwoForm> {
        Ok(match r {
            Route::Spectral | Route::All => curvature_spectral(xi, level)?,
            Route::Transported => curvature_transported(xi, level)?,
            Route::Parts => curvature_from_parts(xi, level)?,
        })
    };
    if route != Route::All {
        let v = pick(route)?;
        return Ok(json!({"level": level.number(), "route": route, "coefficients": matrix_rows(&v.v)}));
    }
    let forms = [pick(Route::Spectral)?, pick(Route::Transported)?, pick(Route::Parts)?];
    let mut deviation: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            deviation = deviation.max(forms[i].max_abs_diff(&forms[j]));
        }
    }
    Ok(json!({
        "level": level.number(),
        "routes": {
            "spectral": matrix_rows(&forms[0].v),
            "transported": matrix_rows(&forms[1].v),
            "parts": matrix_rows(&forms[2].v),
        },
        "max_pairwise_deviation": deviation,
    }))
}

fn decompose_json(xi: &OctetVector, level: Level) -> CliResult<Value> {
    let spec = eigenvalues(xi);
    let v = curvature_spectral(xi, level)?;
    let parts = project_irreducible(&to_tensor_components(&v.v)?);
    let rest = spec.rest_frame();
    let (lambda, mu) = octet_coefficients(level, &rest)?;
    let split = curvature_parts(xi, level)?;
    Ok(json!({
        "level": level.number(),
        "decouplet": sym3_json(&parts.w),
        "antidecouplet": sym3_json(&parts.w_bar),
        "octet": parts.x.to_array(),
        "octet_prefactor": octet_prefactor(&rest)?,
        "octet_coefficients": {"lambda": lambda, "mu": mu},
        "decouplet_strength": decouplet_strength(&spec, level),
        "octet_curvature": matrix_rows(&split.octet.v),
        "decouplet_curvature": matrix_rows(&split.decouplet.v),
    }))
}

fn loop_json(path: &LoopPath, level: Option<Level>) -> CliResult<Value> {
    Ok(match level {
        Some(l) => json!({"level": l.number(), "samples": path.len(), "phase": loop_phase(path, l)?}),
        None => {
            let s = phase_sum_rule_check(path)?;
            json!({"samples": path.len(), "phases": s.phases, "sum": s.sum})
        }
    })
}

fn cap_json(patch: &SurfacePatch, level: Level) -> CliResult<Value> {
    let (nu, _) = patch.shape();
    let flux = surface_flux(patch, level)?;
    let boundary = patch.boundary(2000usize.div_ceil(2 * nu).max(1))?;
    Ok(json!({
        "level": level.number(),
        "flux": flux,
        "boundary_samples": boundary.len(),
        "boundary_phase": loop_phase(&boundary, level)?,
    }))
}

fn sweep_points(args: &SweepArgs) -> CliResult<Vec<OctetVector>> {
    if args.count == 0 {
        return Err(CliError::Usage("count must be positive".into()));
    }
    Ok(match args.kind {
        SweepKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..args.count).map(|_| OctetVector::random(&mut rng)).collect()
        }
        SweepKind::Approach => {
            if !(args.delta_min > 0.0 && args.delta_max >= args.delta_min) {
                return Err(CliError::Usage("need 0 < delta_min <= delta_max".into()));
            }
            let ratio = (args.delta_min / args.delta_max).ln();
            (0..args.count)
                .map(|k| {
                    let t = if args.count == 1 { 0.0 } else { k as f64 / (args.count - 1) as f64 };
                    let delta = args.delta_max * (ratio * t).exp();
                    OctetVector::unit(8) + OctetVector::unit(3) * delta
                })
                .collect()
        }
    })
}

fn csv_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn sweep_row(index: usize, xi: &OctetVector) -> CliResult<String> {
    let s = eigenvalues(xi);
    let all = crate::curvature::curvature_all_levels(xi)?;
    let mut deviation: f64 = 0.0;
    for v in &all {
        deviation = deviation
            .max(curvature_transported(xi, v.level)?.max_abs_diff(v))
            .max(curvature_from_parts(xi, v.level)?.max_abs_diff(v));
    }
    let mut fields = vec![index.to_string()];
    fields.extend(xi.to_array().iter().map(|x| csv_number(*x)));
    fields.push(s.class.to_string());
    fields.push(s.phi.map_or("nan".to_string(), csv_number));
    fields.extend(s.energies.iter().map(|x| csv_number(*x)));
    fields.push(csv_number(s.e12));
    fields.push(csv_number(s.e23));
    fields.push(csv_number(all[0].get(1, 2)));
    fields.push(csv_number(all[0].get(4, 5)));
    fields.push(csv_number(all[1].get(6, 7)));
    fields.push(csv_number(deviation));
    Ok(fields.join(","))
}

fn sweep_csv(args: &SweepArgs) -> CliResult<String> {
    let points = sweep_points(args)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<String> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, xi)| sweep_row(i, xi))
            .collect::<CliResult<_>>()
    })?;
    let mut text = String::from(SWEEP_COLUMNS);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    Ok(text)
}

fn execute(command: Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Classify { xi, tol, out } => emit_json(&spectrum_json(&xi, tol), &out, stdout),
        Command::Spectrum { xi, out } => {
            let s = eigenvalues(&xi);
            let mut v = json!({
                "xi": xi.to_array(),
                "class": s.class,
                "phi": s.phi,
                "energies": s.energies,
                "gaps": {"e12": s.e12, "e23": s.e23, "e13": s.e13},
                "rest_frame": s.rest_frame().to_array(),
            });
            if let Ok(a) = diagonalizer(&xi) {
                let m = a.matrix();
                let rows: Vec<Vec<[f64; 2]>> =
                    (0..3).map(|i| (0..3).map(|j| complex_pair(m[(i, j)])).collect()).collect();
                v["diagonalizer"] = json!(rows);
            }
            emit_json(&v, &out, stdout)
        }
        Command::Curvature { xi, level, route, out } => emit_json(&curvature_route(&xi, level, route)?, &out, stdout),
        Command::Decompose { xi, level, out } => emit_json(&decompose_json(&xi, level)?, &out, stdout),
        Command::LoopPhase { center, axis_u, axis_w, radius, samples, level, out } => {
            let path = LoopPath::circle(&center, &axis_u, &axis_w, radius, samples)?;
            emit_json(&loop_json(&path, level)?, &out, stdout)
        }
        Command::SurfaceFlux { center, frame, radius, theta_max, grid, level, out } => {
            let patch = SurfacePatch::spherical_cap(&center, &frame, radius, theta_max, grid)?;
            emit_json(&cap_json(&patch, level)?, &out, stdout)
        }
        Command::Monopole { direction, radius, tol, offset, level, out } => {
            let est = sphere_flux(&monopole_sphere(&direction, radius, offset)?, level, tol)?;
            emit_json(
                &json!({"level": level.number(), "flux": est.flux, "order": est.order, "change": est.change}),
                &out,
                stdout,
            )
        }
        Command::Sweep { sweep, out } => emit(&sweep_csv(&sweep)?, &out, stdout),
        Command::Selfcheck { seed, out } => {
            let report = crate::selfcheck::run(seed);
            emit_json(&serde_json::to_value(&report).expect("serializable"), &out, stdout)?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!("{} of {} checks failed", report.failed, report.checks.len())))
            }
        }
        Command::Job { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
            let job: JobDescriptor =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("descriptor: {e}")))?;
            let command = job.into_command()?;
            execute(command, stdout)
        }
    }
}

/// Versioned JSON job descriptor.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDescriptor {
    schema: String,
    command: String,
    #[serde(default)]
    xi: Option<Vec<f64>>,
    #[serde(default)]
    generator: Option<Generator>,
    #[serde(default)]
    level: Option<usize>,
    #[serde(default)]
    route: Option<Route>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    output: OutputSpec,
    #[serde(default)]
    sweep: Option<SweepArgs>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tolerances {
    classify: Option<f64>,
    quadrature: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSpec {
    format: Option<String>,
    path: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Generator {
    /// Diagonal point with the given gaps.
    RestFrame { e12: f64, e23: f64 },
    Circle {
        center: Vec<f64>,
        axes: [Vec<f64>; 2],
        radius: f64,
        samples: usize,
    },
    SpherePatch {
        center: Vec<f64>,
        frame: [Vec<f64>; 3],
        radius: f64,
        theta_max: f64,
        grid: usize,
    },
    Sphere {
        #[serde(default)]
        direction: Option<Vec<f64>>,
        radius: f64,
        #[serde(default)]
        offset: Option<[f64; 3]>,
    },
}

fn field_octet(field: &str, v: &[f64]) -> CliResult<OctetVector> {
    octet_from_slice(v).map_err(|e| CliError::Usage(format!("descriptor field `{field}`: {e}")))
}

impl JobDescriptor {
    fn point(&self) -> CliResult<OctetVector> {
        match (&self.xi, &self.generator) {
            (Some(xi), None) => field_octet("xi", xi),
            (None, Some(Generator::RestFrame { e12, e23 })) => {
                if !(*e12 >= 0.0 && *e23 >= 0.0) {
                    return Err(CliError::Usage("descriptor field `generator`: gaps must be non-negative".into()));
                }
                Ok(OctetVector::diagonal(*e12, (e12 + 2.0 * e23) / SQRT3))
            }
            (Some(_), Some(_)) => Err(CliError::Usage("descriptor fields `xi` and `generator` are exclusive".into())),
            _ => Err(CliError::Usage("descriptor field `xi` (or a rest_frame `generator`) is required".into())),
        }
    }

    fn level(&self) -> CliResult<Level> {
        let a = self.level.ok_or_else(|| CliError::Usage("descriptor field `level` is required".into()))?;
        Level::new(a).map_err(|e| CliError::Usage(format!("descriptor field `level`: {e}")))
    }

    fn into_command(self) -> CliResult<Command> {
        if self.schema != SCHEMA {
            return Err(CliError::Usage(format!(
                "descriptor field `schema`: expected \"{SCHEMA}\", got \"{}\"",
                self.schema
            )));
        }
        let expected_format = if self.command == "sweep" { "csv" } else { "json" };
        if let Some(f) = &self.output.format {
            if f != expected_format {
                return Err(CliError::Usage(format!(
                    "descriptor field `output.format`: command `{}` writes {expected_format}",
                    self.command
                )));
            }
        }
        let out = Output { output: self.output.path.clone() };
        Ok(match self.command.as_str() {
            "classify" => Command::Classify {
                xi: self.point()?,
                tol: self.tolerances.classify.unwrap_or(DEFAULT_TOL),
                out,
            },
            "spectrum" => Command::Spectrum { xi: self.point()?, out },
            "curvature" => Command::Curvature {
                xi: self.point()?,
                level: self.level()?,
                route: self.route.unwrap_or(Route::Spectral),
                out,
            },
            "decompose" => Command::Decompose { xi: self.point()?, level: self.level()?, out },
            "loop-phase" => match &self.generator {
                Some(Generator::Circle { center, axes, radius, samples }) => Command::LoopPhase {
                    center: field_octet("generator.center", center)?,
                    axis_u: field_octet("generator.axes", &axes[0])?,
                    axis_w: field_octet("generator.axes", &axes[1])?,
                    radius: *radius,
                    samples: *samples,
                    level: match self.level {
                        Some(_) => Some(self.level()?),
                        None => None,
                    },
                    out,
                },
                _ => return Err(CliError::Usage("descriptor field `generator`: loop-phase needs a circle".into())),
            },
            "surface-flux" => match &self.generator {
                Some(Generator::SpherePatch { center, frame, radius, theta_max, grid }) => Command::SurfaceFlux {
                    center: field_octet("generator.center", center)?,
                    frame: [
                        field_octet("generator.frame", &frame[0])?,
                        field_octet("generator.frame", &frame[1])?,
                        field_octet("generator.frame", &frame[2])?,
                    ],
                    radius: *radius,
                    theta_max: *theta_max,
                    grid: *grid,
                    level: self.level()?,
                    out,
                },
                _ => {
                    return Err(CliError::Usage(
                        "descriptor field `generator`: surface-flux needs a sphere_patch".into(),
                    ))
                }
            },
            "monopole" => match &self.generator {
                Some(Generator::Sphere { direction, radius, offset }) => Command::Monopole {
                    direction: match direction {
                        Some(d) => field_octet("generator.direction", d)?,
                        None => OctetVector::unit(8),
                    },
                    radius: *radius,
                    tol: self.tolerances.quadrature.unwrap_or(2e-4 * std::f64::consts::PI),
                    offset: offset.unwrap_or([0.0; 3]),
                    level: self.level()?,
                    out,
                },
                _ => return Err(CliError::Usage("descriptor field `generator`: monopole needs a sphere".into())),
            },
            "sweep" => Command::Sweep {
                sweep: self
                    .sweep
                    .ok_or_else(|| CliError::Usage("descriptor field `sweep` is required".into()))?,
                out,
            },
            "selfcheck" => Command::Selfcheck { seed: 0, out },
            other => return Err(CliError::Usage(format!("descriptor field `command`: unknown command `{other}`"))),
        })
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("su3holo").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_e8() {
        let (code, out, _) = run_capture(&["classify", "--xi", "0,0,0,0,0,0,0,1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["class"], "upper_degenerate");
        assert!((v["phi"].as_f64().unwrap() - 0.5235988).abs() < 1e-7);
        assert!((v["gaps"]["e23"].as_f64().unwrap() - 0.8660254).abs() < 1e-7);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["curvature", "--xi", "0,0,0,0,0,0,0,1", "--level", "1"]).0, 2);
        assert_eq!(run_capture(&["curvature", "--xi", "1,2,3", "--level", "1"]).0, 1);
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn negative_components_parse() {
        let (code, out, err) = run_capture(&["spectrum", "--xi", "-1,0,0.5,0,0,0,0,-0.25"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("diagonalizer"));
    }
}
