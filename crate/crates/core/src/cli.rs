//! Command-line front end.
//!
//! ```text
//! sepois verify   --model toda --param N=3 --samples 100 --seed 7
//! sepois casimirs --model kermack_mckendric --param r=1 --param a=1
//! sepois darboux  --file model.json
//! sepois simulate --model two_by_two_game --dt 1e-3 --t-end 10 --out traj.csv --consistency
//! sepois models
//! ```
//!
//! Exit status: 0 on success, 1 when a check fails or a model is invalid,
//! 2 on usage, IO and parse errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::casimir::CasimirSet;
use crate::charts::Interval;
use crate::darboux::DarbouxTransform;
use crate::dynamics::{IntegrationStatus, PoissonSystem, ZGradient};
use crate::expr;
use crate::models::{self, Model, ModelError, ModelKind, ZOO};
use crate::structure::{
    numerical_rank, verify_field, verify_separable, ResidualMethod, SampleBox, DEFAULT_FD_STEP,
    DEFAULT_JACOBI_TOLERANCE,
};

/// Tolerance for Casimir gradients and the transformed structure.
const IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "sepois",
    version,
    about = "Separable Poisson structures: verification, Casimirs, Darboux reduction, simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check skew-symmetry and the Jacobi identities at sampled points.
    Verify {
        #[command(flatten)]
        source: ModelSource,
        #[command(flatten)]
        sampling: Sampling,
        /// Residual method; `analytic` needs a separable structure.
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Finite-difference step.
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        step: f64,
        /// Largest accepted residual.
        #[arg(long, default_value_t = DEFAULT_JACOBI_TOLERANCE)]
        tolerance: f64,
        /// Also check this point, `v1,v2,...`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        at: Option<Point>,
    },
    /// Print the Casimir invariants and check J grad C = 0.
    Casimirs {
        #[command(flatten)]
        source: ModelSource,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = IDENTITY_TOLERANCE)]
        tolerance: f64,
    },
    /// Print the Darboux transform: P, rank, canonical matrix and charts.
    Darboux {
        #[command(flatten)]
        source: ModelSource,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = IDENTITY_TOLERANCE)]
        tolerance: f64,
    },
    /// Integrate the Hamiltonian flow and report conservation.
    Simulate {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "t-end", default_value_t = 10.0)]
        t_end: f64,
        /// Initial point `v1,v2,...`; defaults to the model's sample point.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        x0: Option<Point>,
        /// Hamiltonian in x1..xn; defaults to the model's sample Hamiltonian.
        #[arg(long)]
        hamiltonian: Option<String>,
        /// Write the trajectory as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also integrate in Darboux coordinates and compare.
        #[arg(long)]
        consistency: bool,
        /// Differentiate H(x(z)) by central differences with this step
        /// instead of the chain rule.
        #[arg(long, requires = "consistency")]
        consistency_fd_step: Option<f64>,
    },
    /// List the built-in models.
    Models,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Analytic,
    Fd,
}

#[derive(Debug, Args)]
pub struct ModelSource {
    /// Built-in model name (see `models`).
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    model: Option<String>,
    /// Model parameter `key=value`, repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, String)>,
    /// JSON model file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Sampling {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict sampling to `LO,HI` in every coordinate.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<Interval>,
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Comma-separated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

fn parse_point(s: &str) -> Result<Point, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number {v:?}"))
        })
        .collect::<Result<_, _>>()
        .map(Point)
}

fn parse_window(s: &str) -> Result<Interval, String> {
    match parse_point(s)?.0.as_slice() {
        [lo, hi] => Interval::new(*lo, *hi).map_err(|e| e.to_string()),
        _ => Err(format!("expected LO,HI, got {s:?}")),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure {
            code: if e.is_usage() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    execute(&cli.command)
}

/// Run an already parsed command.
pub fn execute(command: &Command) -> Outcome {
    let mut out = String::new();
    let result = match command {
        Command::Verify {
            source,
            sampling,
            method,
            step,
            tolerance,
            at,
        } => verify(
            &mut out,
            source,
            sampling,
            *method,
            *step,
            *tolerance,
            at.as_ref().map(|p| p.0.as_slice()),
        ),
        Command::Casimirs {
            source,
            sampling,
            tolerance,
        } => casimirs(&mut out, source, sampling, *tolerance),
        Command::Darboux {
            source,
            sampling,
            tolerance,
        } => darboux(&mut out, source, sampling, *tolerance),
        Command::Simulate {
            source,
            dt,
            t_end,
            x0,
            hamiltonian,
            out: path,
            consistency,
            consistency_fd_step,
        } => simulate(
            &mut out,
            source,
            &SimulateOptions {
                dt: *dt,
                t_end: *t_end,
                x0: x0.as_ref().map(|p| p.0.as_slice()),
                hamiltonian: hamiltonian.as_deref(),
                path: path.as_ref(),
                consistency: consistency.then(|| match consistency_fd_step {
                    Some(h) => ZGradient::FiniteDifference(*h),
                    None => ZGradient::ChainRule,
                }),
            },
        ),
        Command::Models => {
            list_models(&mut out);
            Ok(0)
        }
    };
    match result {
        Ok(code) => Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: out,
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn load(source: &ModelSource) -> Result<Model, Failure> {
    let params: BTreeMap<String, String> = source.params.iter().cloned().collect();
    match (&source.model, &source.file) {
        (Some(name), None) => Ok(models::instantiate(name, &params)?),
        (None, Some(path)) => {
            if !params.is_empty() {
                return Err(Failure::usage("--param applies to built-in models only"));
            }
            Ok(models::load_model_file(path)?)
        }
        _ => Err(Failure::usage("give exactly one of --model and --file")),
    }
}

fn describe(out: &mut String, model: &Model, source: &ModelSource) {
    let params: BTreeMap<&str, &str> = source
        .params
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    let suffix = if params.is_empty() {
        String::new()
    } else {
        format!(
            " ({})",
            params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(", ")
        )
    };
    let _ = writeln!(out, "model: {}{suffix}", model.name);
    let _ = writeln!(out, "dimension: {}", model.dim());
    if model
        .labels
        .iter()
        .enumerate()
        .any(|(i, l)| *l != format!("x{}", i + 1))
    {
        let pairs: Vec<String> = model
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("x{}={l}", i + 1))
            .collect();
        let _ = writeln!(out, "coordinates: {}", pairs.join(", "));
    }
    for note in &model.notes {
        let _ = writeln!(out, "note: {note}");
    }
}

fn sample_box(model: &Model, sampling: &Sampling) -> SampleBox {
    let base = model.domain().sampler();
    match sampling.window {
        Some(w) => base.restrict(w),
        None => base,
    }
}

fn fmt_point(x: &[f64]) -> String {
    format!(
        "({})",
        x.iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn fmt_num(v: f64) -> String {
    format!("{v:.3e}")
}

fn verify(
    out: &mut String,
    source: &ModelSource,
    sampling: &Sampling,
    method: Option<Method>,
    step: f64,
    tolerance: f64,
    at: Option<&[f64]>,
) -> Result<i32, Failure> {
    let model = load(source)?;
    describe(out, &model, source);
    let mut points = sample_box(&model, sampling).sample(sampling.samples, sampling.seed);
    if let Some(p) = at {
        if p.len() != model.dim() {
            return Err(Failure::usage(format!(
                "--at has {} values, expected {}",
                p.len(),
                model.dim()
            )));
        }
        points.push(p.to_vec());
    }
    let (report, label) = match &model.kind {
        ModelKind::Separable(s) => {
            let m = match method.unwrap_or(Method::Analytic) {
                Method::Analytic => ResidualMethod::Analytic,
                Method::Fd => ResidualMethod::FiniteDifference(step),
            };
            let label = match m {
                ResidualMethod::Analytic => "analytic".to_string(),
                ResidualMethod::FiniteDifference(h) => format!("finite differences, h = {h:e}"),
            };
            (
                verify_separable(s, &points, m, tolerance).map_err(Failure::invalid)?,
                label,
            )
        }
        ModelKind::Field { field, .. } => {
            if method == Some(Method::Analytic) {
                return Err(Failure::usage(
                    "analytic residuals need a separable structure; use --method fd",
                ));
            }
            (
                verify_field(field, &points, step, tolerance).map_err(Failure::invalid)?,
                format!("finite differences, h = {step:e}"),
            )
        }
    };
    let _ = writeln!(out, "method: {label}");
    let _ = writeln!(
        out,
        "samples: {} (seed {})",
        sampling.samples, sampling.seed
    );
    if let Some(p) = at {
        let single = match &model.kind {
            ModelKind::Separable(s) => match method.unwrap_or(Method::Analytic) {
                Method::Analytic => s.jacobi_residual(p),
                Method::Fd => crate::structure::jacobi_residual_fd(s, p, step),
            },
            ModelKind::Field { field, .. } => crate::structure::jacobi_residual_fd(field, p, step),
        }
        .map_err(Failure::invalid)?;
        let _ = writeln!(
            out,
            "Jacobi residual at {}: {}",
            fmt_point(p),
            fmt_num(single)
        );
    }
    let _ = writeln!(out, "max Jacobi residual: {}", fmt_num(report.max_residual));
    let _ = writeln!(out, "worst point: {}", fmt_point(&report.worst_point));
    let _ = writeln!(out, "max skew defect: {}", fmt_num(report.max_skew_defect));
    if let ModelKind::Separable(s) = &model.kind {
        let ranks: Vec<usize> = points
            .iter()
            .map(|p| s.matrix(p).map(|j| numerical_rank(&j, 1e-10)))
            .collect::<Result<_, _>>()
            .map_err(Failure::invalid)?;
        let all_equal = ranks.iter().all(|r| *r == s.rank());
        let _ = writeln!(
            out,
            "rank of A: {}; numerical rank of J {} at every sample",
            s.rank(),
            if all_equal { "agrees" } else { "differs" }
        );
    }
    let _ = writeln!(out, "tolerance: {tolerance:e}");
    let passed = report.passed();
    let _ = writeln!(out, "result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { 0 } else { 1 })
}

fn separable<'a>(
    model: &'a Model,
    what: &str,
) -> Result<&'a crate::structure::SeparableStructure, Failure> {
    model.structure().ok_or_else(|| {
        Failure::usage(format!(
            "{what} needs a separable structure (matrix and charts)"
        ))
    })
}

fn casimirs(
    out: &mut String,
    source: &ModelSource,
    sampling: &Sampling,
    tolerance: f64,
) -> Result<i32, Failure> {
    let model = load(source)?;
    let s = separable(&model, "casimirs")?;
    describe(out, &model, source);
    let set = CasimirSet::new(s);
    let _ = writeln!(out, "rank of A: {}", s.rank());
    let _ = writeln!(out, "Casimir functions: {}", set.len());
    let _ = write!(out, "{set}");
    if set.is_empty() {
        return Ok(0);
    }
    let points = sample_box(&model, sampling).sample(sampling.samples, sampling.seed);
    let mut worst: f64 = 0.0;
    let mut independent = true;
    for p in &points {
        for c in set.iter() {
            worst = worst.max(c.gradient_check(s, p).map_err(Failure::invalid)?);
        }
        independent &= set.independent_at(s, p).map_err(Failure::invalid)?;
    }
    let _ = writeln!(
        out,
        "max |J grad C| over {} samples (seed {}): {}",
        points.len(),
        sampling.seed,
        fmt_num(worst)
    );
    let _ = writeln!(
        out,
        "functionally independent at every sample: {}",
        if independent { "yes" } else { "no" }
    );
    let passed = worst <= tolerance && independent;
    let _ = writeln!(out, "result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { 0 } else { 1 })
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

fn darboux(
    out: &mut String,
    source: &ModelSource,
    sampling: &Sampling,
    tolerance: f64,
) -> Result<i32, Failure> {
    let model = load(source)?;
    let s = separable(&model, "darboux")?;
    describe(out, &model, source);
    let t = DarbouxTransform::new(s);
    let _ = writeln!(out, "chart step y = F(x):");
    for (i, c) in s.charts().iter().enumerate() {
        let (text, _) = c.antiderivative_text(&format!("x{}", i + 1));
        let _ = writeln!(
            out,
            "  y{} = {text}    on {}",
            i + 1,
            s.domain().intervals()[i]
        );
    }
    let _ = writeln!(out, "linear step z = P y with P =");
    let _ = write!(out, "{}", indent(&t.p().to_string()));
    let _ = writeln!(out, "rank r = {}", t.rank());
    let _ = writeln!(out, "P A P^T =");
    let _ = write!(out, "{}", indent(&t.canonical().to_string()));
    let cas: Vec<String> = t
        .casimir_coordinates()
        .map(|i| format!("z{}", i + 1))
        .collect();
    let _ = writeln!(
        out,
        "Casimir coordinates: {}",
        if cas.is_empty() {
            "none".into()
        } else {
            cas.join(", ")
        }
    );
    let points = sample_box(&model, sampling).sample(sampling.samples, sampling.seed);
    let mut worst: f64 = 0.0;
    for p in &points {
        worst = worst.max(t.transformed_structure_check(p).map_err(Failure::invalid)?);
    }
    let _ = writeln!(
        out,
        "max |Dz J Dz^T - canonical| over {} samples (seed {}): {}",
        points.len(),
        sampling.seed,
        fmt_num(worst)
    );
    let passed = worst <= tolerance;
    let _ = writeln!(out, "result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { 0 } else { 1 })
}

struct SimulateOptions<'a> {
    dt: f64,
    t_end: f64,
    x0: Option<&'a [f64]>,
    hamiltonian: Option<&'a str>,
    path: Option<&'a PathBuf>,
    consistency: Option<ZGradient>,
}

fn simulate(
    out: &mut String,
    source: &ModelSource,
    opts: &SimulateOptions,
) -> Result<i32, Failure> {
    let model = load(source)?;
    let s = separable(&model, "simulate")?;
    let h_text = opts
        .hamiltonian
        .map(str::to_string)
        .or_else(|| model.hamiltonian.clone())
        .ok_or_else(|| Failure::usage("no Hamiltonian: pass --hamiltonian"))?;
    let h =
        expr::parse(&h_text, s.dim()).map_err(|e| Failure::usage(format!("--hamiltonian: {e}")))?;
    let x0 = match opts.x0 {
        Some(x) => x.to_vec(),
        None => model
            .initial_point
            .clone()
            .unwrap_or_else(|| s.domain().sampler().center()),
    };
    if x0.len() != s.dim() {
        return Err(Failure::usage(format!(
            "--x0 has {} values, expected {}",
            x0.len(),
            s.dim()
        )));
    }
    describe(out, &model, source);
    let system = PoissonSystem::new(s.clone(), h).map_err(Failure::invalid)?;
    let _ = writeln!(out, "H = {}", system.hamiltonian());
    let _ = writeln!(out, "x0 = {}", fmt_point(&x0));
    let _ = writeln!(out, "dt = {:e}, t_end = {}", opts.dt, opts.t_end);
    let traj = system
        .integrate(&x0, opts.t_end, opts.dt)
        .map_err(Failure::invalid)?;
    match traj.status {
        IntegrationStatus::Completed => {
            let _ = writeln!(out, "status: completed, {} steps", traj.len() - 1);
        }
        IntegrationStatus::DomainExit { t } => {
            let _ = writeln!(
                out,
                "status: left the domain during the step from t = {t}, {} steps kept",
                traj.len() - 1
            );
        }
    }
    let _ = writeln!(out, "final state: {}", fmt_point(traj.last()));
    let report = system
        .conservation_report(&traj)
        .map_err(Failure::invalid)?;
    let _ = writeln!(out, "drift H: {}", fmt_num(report.hamiltonian_drift));
    for (i, d) in report.casimir_drifts.iter().enumerate() {
        let _ = writeln!(out, "drift C_{}: {}", i + 1, fmt_num(*d));
    }
    if let Some(gradient) = opts.consistency {
        let t = DarbouxTransform::new(s);
        let d = system
            .darboux_consistency_with(&t, &x0, opts.t_end, opts.dt, gradient)
            .map_err(Failure::invalid)?;
        let _ = writeln!(
            out,
            "Darboux consistency (max distance in z): {}",
            fmt_num(d)
        );
    }
    if let Some(path) = opts.path {
        let file = std::fs::File::create(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let mut w = std::io::BufWriter::new(file);
        system
            .write_csv(&traj, &mut w)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        std::io::Write::flush(&mut w)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let _ = writeln!(out, "trajectory: {} ({} rows)", path.display(), traj.len());
    }
    Ok(0)
}

fn list_models(out: &mut String) {
    let width = ZOO.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in ZOO {
        let _ = writeln!(out, "{:width$}  {}", e.name, e.summary);
        if !e.params.is_empty() {
            let _ = writeln!(out, "{:width$}  params: {}", "", e.params);
        }
    }
}
