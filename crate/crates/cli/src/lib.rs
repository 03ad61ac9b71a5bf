//! Command-line front end: `build`, `theorem`, `corollary` and `sweep`.
//!
//! Exit codes: 0 success, 1 certification (or computation) failed,
//! 2 invalid input, 3 I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use nodoid_core::certify::{
    self, CertifyError, CorollaryCertificate, TheoremCertificate, TheoremOptions,
};
use nodoid_core::curvature::{self, CurvatureExtremes};
use nodoid_core::measures::{self, Exponent, MeasureSet};
use nodoid_core::mesh::{self, MeshFormat};
use nodoid_core::profile::{self, JunctionReport, ProfileError, ProfileParams};
use nodoid_core::Tolerance;

pub mod report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Failed(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Failed(_) => EXIT_FAILED,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::InvalidParams(_) | ProfileError::Degenerate(_) => {
                CliError::Invalid(e.to_string())
            }
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::InvalidEpsilon(_)
            | CertifyError::InvalidShrink(_)
            | CertifyError::InvalidBeta(_)
            | CertifyError::ExponentTooSmall(_)
            | CertifyError::InvalidSchedule
            | CertifyError::InvalidBetas => CliError::Invalid(e.to_string()),
            CertifyError::Profile(p) => p.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "nodoid",
    version,
    about = "Thin ball-like solids with bounded mean curvature"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Obj,
    Stl,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one instance and write reports, profile/curvature samples and a mesh.
    Build {
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Quadrature tolerance (absolute and relative).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        profile_csv: Option<PathBuf>,
        #[arg(long)]
        curvature_csv: Option<PathBuf>,
        #[arg(long)]
        mesh_out: Option<PathBuf>,
        /// Mesh format; inferred from the --mesh-out extension when omitted.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long, default_value_t = 256)]
        n_profile: usize,
        #[arg(long, default_value_t = 128)]
        n_angular: usize,
        /// Samples per arc in the CSV dumps.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Find (h, beta) with sup|H| <= 1, |S - 8 pi| <= eps and V <= eps.
    Theorem {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 0.25)]
        beta_shrink: f64,
        #[arg(long, default_value_t = 60)]
        max_iters: usize,
    },
    /// Beat the unit-volume ball's L^p curvature norm for p > 2 (`inf` allowed).
    Corollary {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Tabulate R, S, V and curvature extremes along a geometric beta sequence.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[arg(long)]
        beta_start: f64,
        #[arg(long)]
        beta_ratio: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn tolerance(tol: Option<f64>) -> Result<Tolerance, CliError> {
    match tol {
        None => Ok(Tolerance::default()),
        Some(t) => Tolerance::uniform(t).map_err(|e| CliError::Invalid(e.to_string())),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceEcho {
    pub quadrature: Tolerance,
    pub junction_tol: f64,
    pub cert_tol: f64,
    pub majorant_tol: f64,
}

impl ToleranceEcho {
    fn new(quadrature: Tolerance) -> Self {
        ToleranceEcho {
            quadrature,
            junction_tol: profile::JUNCTION_TOL,
            cert_tol: certify::CERT_TOL,
            majorant_tol: certify::MAJORANT_TOL,
        }
    }
}

/// Document written by `--json`. Field order is fixed; wall-clock timing is
/// printed to stderr and never serialized, so reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub tolerances: ToleranceEcho,
    pub params: Option<ProfileParams>,
    pub measures: Option<MeasureSet>,
    pub curvature: Option<CurvatureExtremes>,
    pub junctions: Vec<JunctionReport>,
    pub theorem: Option<TheoremCertificate>,
    pub corollary: Option<CorollaryCertificate>,
}

impl RunReport {
    fn new(command: Vec<String>, tol: Tolerance) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            tolerances: ToleranceEcho::new(tol),
            params: None,
            measures: None,
            curvature: None,
            junctions: Vec::new(),
            theorem: None,
            corollary: None,
        }
    }
}

fn write_json(path: &Path, report: &RunReport) -> Result<(), CliError> {
    let mut w = create(path)?;
    report::write_json(&mut w, report).map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Human-readable output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let started = Instant::now();
    let result = match cli.command {
        Command::Build {
            h,
            beta,
            tol,
            json,
            profile_csv,
            curvature_csv,
            mesh_out,
            format,
            n_profile,
            n_angular,
            samples,
        } => cmd_build(
            BuildArgs {
                h,
                beta,
                tol,
                json,
                profile_csv,
                curvature_csv,
                mesh_out,
                format,
                n_profile,
                n_angular,
                samples,
            },
            echo,
            out,
        ),
        Command::Theorem {
            epsilon,
            tol,
            json,
            beta_shrink,
            max_iters,
        } => cmd_theorem(epsilon, tol, json, beta_shrink, max_iters, echo, out),
        Command::Corollary { p, tol, json } => cmd_corollary(&p, tol, json, echo, out),
        Command::Sweep {
            h,
            beta_start,
            beta_ratio,
            steps,
            tol,
            csv,
        } => cmd_sweep(h, beta_start, beta_ratio, steps, tol, csv, out),
    };
    let _ = writeln!(err, "elapsed: {:.3} s", started.elapsed().as_secs_f64());
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub struct BuildArgs {
    pub h: f64,
    pub beta: f64,
    pub tol: Option<f64>,
    pub json: Option<PathBuf>,
    pub profile_csv: Option<PathBuf>,
    pub curvature_csv: Option<PathBuf>,
    pub mesh_out: Option<PathBuf>,
    pub format: Option<FormatArg>,
    pub n_profile: usize,
    pub n_angular: usize,
    pub samples: usize,
}

pub fn cmd_build(args: BuildArgs, echo: Vec<String>, out: &mut dyn Write) -> Result<i32, CliError> {
    let tol = tolerance(args.tol)?;
    let params = ProfileParams::with_tolerance(args.h, args.beta, tol)?;
    let prof = profile::build_closed_profile(&params)?;
    let extremes = curvature::extremes(prof.meridian(), curvature::SCAN_SAMPLES).map_err(failed)?;
    let exps = [
        Exponent::Finite(2.0),
        Exponent::Finite(3.0),
        Exponent::Infinity,
    ];
    let measures = measures::measure_set(&prof, &exps, &tol).map_err(failed)?;
    let junctions = profile::check_c1(&prof);

    if let Some(path) = &args.profile_csv {
        let rows = profile::sample_profile(&prof, args.samples).map_err(failed)?;
        let mut w = report::csv_writer(create(path)?);
        w.write_record(["arc", "t", "x", "y", "dx", "dy"])
            .map_err(failed)?;
        for r in rows {
            w.write_record([
                r.arc.label().to_string(),
                report::f17(r.t),
                report::f17(r.x),
                report::f17(r.y),
                report::f17(r.dx),
                report::f17(r.dy),
            ])
            .map_err(failed)?;
        }
        w.flush().map_err(io_err(path))?;
    }
    if let Some(path) = &args.curvature_csv {
        let rows = curvature::sample_curvature(prof.meridian(), args.samples).map_err(failed)?;
        let mut w = report::csv_writer(create(path)?);
        w.write_record(["arc", "t", "x", "H", "k_meridian", "k_parallel"])
            .map_err(failed)?;
        for r in rows {
            w.write_record([
                r.arc.label().to_string(),
                report::f17(r.t),
                report::f17(r.x),
                report::f17(r.h),
                report::f17(r.k_meridian),
                report::f17(r.k_parallel),
            ])
            .map_err(failed)?;
        }
        w.flush().map_err(io_err(path))?;
    }
    if let Some(path) = &args.mesh_out {
        let format = match args.format {
            Some(FormatArg::Stl) => MeshFormat::StlBinary,
            Some(FormatArg::Obj) => MeshFormat::Obj,
            None if path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("stl")) =>
            {
                MeshFormat::StlBinary
            }
            None => MeshFormat::Obj,
        };
        let m =
            mesh::tessellate(prof.meridian(), args.n_profile, args.n_angular).map_err(
                |e| match e {
                    mesh::MeshError::InvalidResolution(msg) => CliError::Invalid(msg),
                    other => failed(other),
                },
            )?;
        let topo = mesh::topology(&m);
        let mut w = create(path)?;
        let bytes = mesh::export(&m, format, &mut w).map_err(|e| match e {
            mesh::MeshError::Io(source) => CliError::Io {
                path: path.clone(),
                source,
            },
            other => failed(other),
        })?;
        w.flush().map_err(io_err(path))?;
        let _ = writeln!(
            out,
            "mesh: {} vertices, {} triangles, chi = {}, watertight = {}, {bytes} bytes -> {}",
            topo.vertices,
            topo.faces,
            topo.euler_characteristic,
            topo.watertight(),
            path.display()
        );
    }

    let max_pos = junctions.iter().map(|j| j.position_gap).fold(0.0, f64::max);
    let max_ang = junctions
        .iter()
        .map(|j| j.tangent_angle_gap)
        .fold(0.0, f64::max);
    let _ = writeln!(
        out,
        "h = {}  beta = {}  R = {:.12}",
        params.h(),
        params.beta(),
        params.r()
    );
    if !params.in_proof_regime() {
        let _ = writeln!(out, "note: beta outside (0, 1]");
    }
    let _ = writeln!(
        out,
        "S = {:.12}  V = {:.12}",
        measures.area, measures.volume
    );
    let _ = writeln!(
        out,
        "sup|H| = {:.12}  inf H = {:.12}  sup H = {:.12}",
        extremes.sup_abs, extremes.inf, extremes.sup
    );
    let _ = writeln!(
        out,
        "junction gaps: position {max_pos:.3e}  tangent {max_ang:.3e}"
    );

    if let Some(path) = &args.json {
        let mut rep = RunReport::new(echo, tol);
        rep.params = Some(params);
        rep.measures = Some(measures);
        rep.curvature = Some(extremes);
        rep.junctions = junctions;
        write_json(path, &rep)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_theorem(
    epsilon: f64,
    tol: Option<f64>,
    json: Option<PathBuf>,
    beta_shrink: f64,
    max_iters: usize,
    echo: Vec<String>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let tol = tolerance(tol)?;
    let opts = TheoremOptions {
        beta_shrink,
        max_iters,
        tol,
        ..TheoremOptions::default()
    };
    let cert = certify::certify_theorem(epsilon, &opts)?;
    let _ = writeln!(
        out,
        "epsilon = {epsilon}  h = {:.12}  beta = {}  iterations = {}",
        cert.h,
        cert.params.map_or(f64::NAN, |p| p.beta()),
        cert.iterations
    );
    let _ = writeln!(
        out,
        "sup|H| = {:.12} ({})  |S - 8pi| = {:.3e} ({})  V = {:.3e} ({})",
        cert.sup_abs_h,
        verdict(cert.clauses.curvature_bounded),
        (cert.area - 8.0 * std::f64::consts::PI).abs(),
        verdict(cert.clauses.area_near_8pi),
        cert.volume,
        verdict(cert.clauses.volume_small)
    );
    let _ = writeln!(out, "certificate: {}", verdict(cert.passed));
    let passed = cert.passed;
    if let Some(path) = &json {
        let mut rep = RunReport::new(echo, tol);
        rep.params = cert.params;
        rep.theorem = Some(cert);
        write_json(path, &rep)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn cmd_corollary(
    p: &str,
    tol: Option<f64>,
    json: Option<PathBuf>,
    echo: Vec<String>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let p: Exponent = p.parse().map_err(CliError::Invalid)?;
    let tol = tolerance(tol)?;
    let opts = TheoremOptions {
        tol,
        ..TheoremOptions::default()
    };
    let cert = certify::certify_corollary(p, &certify::default_schedule(), &opts)?;
    let _ = writeln!(out, "p = {p}  epsilon = {}", cert.epsilon);
    let _ = writeln!(
        out,
        "||H||_p (unit volume) = {:.12}  ball = {:.12}  margin = {:.6e}",
        cert.lhs, cert.rhs, cert.margin
    );
    let _ = writeln!(
        out,
        "majorant chain: measured {:.6e} <= {:.6e} <= {:.6e} ({})",
        cert.measured,
        cert.hoelder_bound,
        cert.majorant,
        verdict(cert.majorant_ok)
    );
    let _ = writeln!(out, "certificate: {}", verdict(cert.passed));
    let passed = cert.passed;
    if let Some(path) = &json {
        let mut rep = RunReport::new(echo, tol);
        rep.params = cert.params;
        rep.corollary = Some(cert);
        write_json(path, &rep)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_sweep(
    h: f64,
    beta_start: f64,
    beta_ratio: f64,
    steps: usize,
    tol: Option<f64>,
    csv: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(CliError::Invalid(format!("h must be positive, got {h}")));
    }
    if !(beta_start > 0.0 && beta_start.is_finite()) {
        return Err(CliError::Invalid(format!(
            "beta-start must be positive, got {beta_start}"
        )));
    }
    if !(beta_ratio > 0.0 && beta_ratio < 1.0) {
        return Err(CliError::Invalid(format!(
            "beta-ratio must lie in (0, 1), got {beta_ratio}"
        )));
    }
    if steps == 0 {
        return Err(CliError::Invalid("steps must be at least 1".into()));
    }
    let tol = tolerance(tol)?;
    let betas = certify::geometric_schedule(beta_start, beta_ratio, steps);
    let rep = certify::asymptotics_sweep(h, &betas, &tol)?;
    match &csv {
        Some(path) => {
            let w = create(path)?;
            report::write_sweep_csv(w, &rep).map_err(io_err(path))?;
        }
        None => report::write_sweep_csv(&mut *out, &rep).map_err(failed)?,
    }
    let o = &rep.orders;
    let _ = writeln!(
        out,
        "fitted orders in beta: R {}  area {}  volume {}  infH {}",
        report::opt(o.r),
        report::opt(o.area),
        report::opt(o.volume),
        report::opt(o.inf_h)
    );
    Ok(EXIT_OK)
}
