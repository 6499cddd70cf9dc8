//! The `rklearn` command line.
//!
//! Every subcommand prints JSON (or plain text for `list`) to stdout and
//! reports failures on stderr as one line of JSON with a stable `code`.
//! Exit status is 0 on success, 2 for usage errors and 1 for computational
//! errors. `RKLEARN_THREADS` caps the worker pool used by grid sweeps.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::butcher::{builtin, parse_tableau, validate, ButcherTableau, BUILTIN_METHODS};
use crate::complex::{parse_complex, C64};
use crate::design::{damping_reach, design};
use crate::error::{Error, Result};
use crate::grid::{evaluate_field, export_csv, render_contours, Metric, Region, DEFAULT_LEVELS};
use crate::learnability::{solve, ProblemSpec, RootPolicy};
use crate::trainer::{
    compare_with_theory, generate_dataset, train_linear, train_mlp, MlpConfig, Preset,
    TrainingReport, TrajectoryConfig, DEFAULT_HALF_WIDTH,
};

pub const THREADS_ENV: &str = "RKLEARN_THREADS";

const MAX_DESIGN_STAGES: usize = 64;

#[derive(Parser, Debug)]
#[command(
    name = "rklearn",
    version,
    about = "Learnability analysis of Runge-Kutta methods on the test equation x' = lambda x"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in tableaux.
    List,
    /// Solve the learnability equation for one (lambda, h).
    Solve(SolveArgs),
    /// Sweep a coefficient over a region of z = h*lambda; writes CSV, SVG and a manifest.
    Analyze(AnalyzeArgs),
    /// Chebyshev stability polynomial, its tableau and damping reach.
    Design(DesignArgs),
    /// Train a linear model or MLP on generated data and compare with the theory.
    Train(TrainArgs),
    /// Compare a saved training report with the learnability roots.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
struct MethodArgs {
    /// Built-in method name.
    #[arg(long, default_value = "rk4", conflicts_with = "tableau")]
    method: String,
    /// JSON tableau file with `A` and `b`.
    #[arg(long)]
    tableau: Option<PathBuf>,
}

impl MethodArgs {
    fn load(&self) -> Result<ButcherTableau> {
        match &self.tableau {
            Some(path) => parse_tableau(&fs::read_to_string(path)?),
            None => builtin(&self.method),
        }
    }
}

fn complex_arg(s: &str) -> std::result::Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn policy_arg(s: &str) -> std::result::Result<RootPolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn metric_arg(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

#[derive(Clone, Debug)]
struct Levels(Vec<f64>);

fn levels_arg(s: &str) -> std::result::Result<Levels, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad level `{t}`"))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Levels)
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    method: MethodArgs,
    /// Complex literal such as `0+3.14159i` or `-2-1e-3i`.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    lambda: C64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    h: f64,
    /// `closest`, `all` or `index:K`.
    #[arg(long, default_value = "closest", value_parser = policy_arg)]
    policy: RootPolicy,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    re_max: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    im_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    im_max: f64,
    /// Nodes along the real axis.
    #[arg(long, default_value_t = 600)]
    nx: usize,
    /// Nodes along the imaginary axis.
    #[arg(long, default_value_t = 600)]
    ny: usize,
    /// `l_alpha`, `l_real` or `l_imag`.
    #[arg(long, default_value = "l_alpha", value_parser = metric_arg)]
    metric: Metric,
    /// `closest` or `index:K`.
    #[arg(long, default_value = "closest", value_parser = policy_arg)]
    policy: RootPolicy,
    /// Comma-separated ascending contour levels.
    #[arg(long, value_parser = levels_arg)]
    levels: Option<Levels>,
    /// Output prefix; writes `<out>.csv`, `<out>.svg`, `<out>.manifest.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[arg(long, default_value_t = 2)]
    stages: usize,
    /// Tolerance on l_alpha along the negative real axis.
    #[arg(long, default_value_t = 0.2, value_parser = positive)]
    tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModelKind {
    Linear,
    Mlp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum PresetArg {
    Smoke,
    Reduced,
    Full,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Smoke => Preset::Smoke,
            PresetArg::Reduced => Preset::Reduced,
            PresetArg::Full => Preset::Full,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct TrajectoryArgs {
    #[arg(long, default_value_t = 20.0, value_parser = positive)]
    t_end: f64,
    #[arg(long, default_value_t = 401)]
    samples: usize,
    /// Initial value of the plotted trajectories.
    #[arg(long, default_value = "1", value_parser = complex_arg, allow_hyphen_values = true)]
    x0: C64,
}

impl TrajectoryArgs {
    fn config(&self) -> TrajectoryConfig {
        TrajectoryConfig {
            t_end: self.t_end,
            samples: self.samples,
            x0: self.x0,
        }
    }
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, default_value = "0+1.5i", value_parser = complex_arg, allow_hyphen_values = true)]
    lambda: C64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    h: f64,
    #[arg(long, value_enum, default_value_t = ModelKind::Mlp)]
    model: ModelKind,
    /// Seeds both the dataset and the MLP initialization.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sizes for MLP runs; explicit flags override it. Defaults to `full`.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long)]
    hidden: Option<usize>,
    /// Number of training pairs.
    #[arg(long)]
    n: Option<usize>,
    /// Half-width of the sampling box.
    #[arg(long, default_value_t = DEFAULT_HALF_WIDTH, value_parser = positive)]
    half_width: f64,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long, value_parser = positive)]
    lr: Option<f64>,
    /// Mini-batch size; full batch when omitted.
    #[arg(long)]
    batch_size: Option<usize>,
    /// Starting alpha for the linear model; defaults to lambda.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    init_alpha: Option<C64>,
    #[command(flatten)]
    trajectory: TrajectoryArgs,
    /// Output prefix; writes `.report.json`, `.trajectory.csv`, `.comparison.json`, `.manifest.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Training report written by `train`.
    #[arg(long)]
    report: PathBuf,
    /// Tableau file, when the report's method is not built in.
    #[arg(long)]
    tableau: Option<PathBuf>,
    #[command(flatten)]
    trajectory: TrajectoryArgs,
    /// Optional prefix for `.comparison.json` and `.trajectory.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    argv: &'a [String],
    seed: Option<u64>,
    config: Value,
    outputs: Vec<String>,
    wall_time_s: f64,
}

struct Outcome {
    status: i32,
}

/// A failure before or during a command, with its exit status.
struct Failure {
    status: i32,
    code: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            status: if is_usage(&e) { 2 } else { 1 },
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownMethod { .. }
            | Error::Malformed(_)
            | Error::Dimension(_)
            | Error::NonFinite(_)
            | Error::InvalidProblem(_)
            | Error::InvalidRegion(_)
            | Error::InvalidLevels(_)
            | Error::InvalidArgument(_)
            | Error::PolicyAll
            | Error::Json(_)
    )
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: 2,
        code: "usage".into(),
        message: message.into(),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    match dispatch(&argv, stdout) {
        Ok(o) => o.status,
        Err(f) => {
            let line = json!({ "code": f.code, "message": f.message });
            let _ = writeln!(stderr, "{line}");
            f.status
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn configure_threads() -> std::result::Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a second command in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn dispatch(argv: &[String], stdout: &mut dyn Write) -> std::result::Result<Outcome, Failure> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            write!(stdout, "{}", e.render()).map_err(Error::from)?;
            return Ok(Outcome { status: 0 });
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return Err(usage(first.trim_start_matches("error: ")));
        }
    };
    configure_threads()?;
    let started = Instant::now();
    match cli.command {
        Command::List => cmd_list(stdout)?,
        Command::Solve(a) => cmd_solve(&a, stdout)?,
        Command::Analyze(a) => cmd_analyze(&a, argv, started, stdout)?,
        Command::Design(a) => cmd_design(&a, stdout)?,
        Command::Train(a) => cmd_train(&a, argv, started, stdout)?,
        Command::Compare(a) => cmd_compare(&a, stdout)?,
    }
    Ok(Outcome { status: 0 })
}

fn emit(stdout: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

fn create_parent(prefix: &Path) -> Result<()> {
    match prefix.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => Ok(fs::create_dir_all(dir)?),
        _ => Ok(()),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_manifest(
    prefix: &Path,
    command: &str,
    argv: &[String],
    seed: Option<u64>,
    config: Value,
    mut outputs: Vec<String>,
    started: Instant,
) -> Result<String> {
    let path = with_suffix(prefix, ".manifest.json");
    outputs.push(path.display().to_string());
    let manifest = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        argv,
        seed,
        config,
        outputs,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(path.display().to_string())
}

fn cmd_list(stdout: &mut dyn Write) -> Result<()> {
    for name in BUILTIN_METHODS {
        let t = builtin(name)?;
        let report = validate(&t);
        writeln!(
            stdout,
            "{:<18} {} stage{}  {:<8}  order {}",
            name,
            t.stages(),
            if t.stages() == 1 { " " } else { "s" },
            if report.explicit {
                "explicit"
            } else {
                "implicit"
            },
            report.detected_order
        )?;
    }
    Ok(())
}

/// Marks coefficient objects that contain nulls with a `reason`.
fn annotate_coefficients(obj: &mut Value, reason: &str) {
    let Some(map) = obj.as_object_mut() else {
        return;
    };
    let missing: Vec<Value> = ["l_alpha", "l_real", "l_imag", "mu"]
        .iter()
        .filter(|k| map.get(**k).is_some_and(Value::is_null))
        .map(|k| Value::from(*k))
        .collect();
    if !missing.is_empty() {
        map.insert("reason".into(), reason.into());
        map.insert("undefined".into(), Value::Array(missing));
    }
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let t = a.method.load()?;
    let spec = ProblemSpec::new(a.lambda, a.h)?;
    let result = solve(&t, &spec, a.policy)?;
    let mut v = serde_json::to_value(&result)?;
    let top_reason = if result.selected.is_some() {
        "undefined"
    } else {
        "no_selection"
    };
    annotate_coefficients(&mut v["coefficients"], top_reason);
    if let Some(roots) = v["roots"].as_array_mut() {
        for r in roots {
            annotate_coefficients(&mut r["coefficients"], "undefined");
        }
    }
    v.as_object_mut()
        .expect("result serializes to an object")
        .insert("method".into(), t.name().into());
    emit(stdout, &v)
}

fn cmd_analyze(
    a: &AnalyzeArgs,
    argv: &[String],
    started: Instant,
    stdout: &mut dyn Write,
) -> Result<()> {
    let t = a.method.load()?;
    let region = Region::new((a.re_min, a.re_max), (a.im_min, a.im_max), a.nx, a.ny)?;
    let levels = a
        .levels
        .clone()
        .map_or_else(|| DEFAULT_LEVELS.to_vec(), |l| l.0);
    let field = evaluate_field(&t, &region, a.metric, a.policy)?;
    let svg = render_contours(&field, &levels)?;

    create_parent(&a.out)?;
    let csv_path = with_suffix(&a.out, ".csv");
    let svg_path = with_suffix(&a.out, ".svg");
    let mut csv = std::io::BufWriter::new(fs::File::create(&csv_path)?);
    export_csv(&field, &mut csv)?;
    csv.flush()?;
    fs::write(&svg_path, svg)?;

    let defined = field.values.iter().filter(|v| v.is_some()).count();
    let outputs = vec![
        csv_path.display().to_string(),
        svg_path.display().to_string(),
    ];
    let config = json!({
        "method": t.name(),
        "tableau": serde_json::from_str::<Value>(&t.to_json())?,
        "region": region,
        "metric": a.metric,
        "policy": a.policy.to_string(),
        "levels": levels,
    });
    let manifest = write_manifest(
        &a.out,
        "analyze",
        argv,
        None,
        config,
        outputs.clone(),
        started,
    )?;
    let all_outputs = [outputs, vec![manifest]].concat();
    emit(
        stdout,
        &json!({
            "method": t.name(),
            "nodes": field.values.len(),
            "defined": defined,
            "outputs": all_outputs,
        }),
    )
}

fn cmd_design(a: &DesignArgs, stdout: &mut dyn Write) -> Result<()> {
    if a.stages == 0 || a.stages > MAX_DESIGN_STAGES {
        return Err(Error::InvalidArgument(format!(
            "stages must be between 1 and {MAX_DESIGN_STAGES}"
        )));
    }
    let d = design(a.stages, a.tol);
    let midpoint = damping_reach(&builtin("explicit_midpoint")?, a.tol);
    let mut v = serde_json::to_value(&d)?;
    let map = v.as_object_mut().expect("design serializes to an object");
    map.insert(
        "comparison".into(),
        json!([
            { "method": format!("cheb{}", a.stages), "damping_reach": d.damping_reach },
            { "method": "explicit_midpoint", "damping_reach": midpoint },
        ]),
    );
    map.insert(
        "exceeds_midpoint".into(),
        (d.damping_reach > midpoint).into(),
    );
    emit(stdout, &v)
}

fn cmd_train(
    a: &TrainArgs,
    argv: &[String],
    started: Instant,
    stdout: &mut dyn Write,
) -> Result<()> {
    let t = a.method.load()?;
    let preset: Preset = a.preset.unwrap_or(PresetArg::Full).into();
    let n = a.n.unwrap_or(preset.samples());
    let mut cfg = preset.optimizer();
    if let Some(e) = a.epochs {
        cfg.epochs = e;
    }
    if let Some(lr) = a.lr {
        cfg.lr = lr;
    }
    cfg.batch_size = a.batch_size;
    let data = generate_dataset(a.lambda, a.h, n, a.half_width, a.seed)?;
    let report = match a.model {
        ModelKind::Linear => train_linear(&t, &data, a.init_alpha.unwrap_or(a.lambda), &cfg)?.1,
        ModelKind::Mlp => {
            let mlp = MlpConfig {
                hidden: a.hidden.unwrap_or(preset.mlp(a.seed).hidden),
                seed: a.seed,
            };
            train_mlp(&t, &data, &mlp, &cfg)?.1
        }
    };
    let spec = ProblemSpec::new(a.lambda, a.h)?;
    let theory = solve(&t, &spec, RootPolicy::All)?;
    let cmp = compare_with_theory(&report, &theory, &a.trajectory.config())?;

    create_parent(&a.out)?;
    let report_path = with_suffix(&a.out, ".report.json");
    let traj_path = with_suffix(&a.out, ".trajectory.csv");
    let cmp_path = with_suffix(&a.out, ".comparison.json");
    fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;
    fs::write(&traj_path, cmp.trajectory_csv())?;
    fs::write(&cmp_path, serde_json::to_string_pretty(&cmp)? + "\n")?;

    let outputs: Vec<String> = [&report_path, &traj_path, &cmp_path]
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    let config = json!({
        "method": t.name(),
        "tableau": serde_json::from_str::<Value>(&t.to_json())?,
        "lambda": a.lambda,
        "h": a.h,
        "model": a.model,
        "preset": preset,
        "n": n,
        "half_width": a.half_width,
        "hidden": report.mlp.map(|m| m.hidden),
        "init_alpha": report.init_alpha,
        "optimizer": cfg,
        "trajectory": a.trajectory.config(),
    });
    let manifest = write_manifest(
        &a.out,
        "train",
        argv,
        Some(a.seed),
        config,
        outputs.clone(),
        started,
    )?;
    let all_outputs = [outputs, vec![manifest]].concat();
    emit(
        stdout,
        &json!({
            "method": t.name(),
            "model": a.model,
            "estimated_alpha": report.estimated_alpha,
            "nearest_root": report.nearest_root,
            "distance": report.distance,
            "relative_distance": report.relative_distance,
            "final_loss": report.final_loss,
            "amplitude_grows": cmp.amplitude_grows,
            "outputs": all_outputs,
        }),
    )
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write) -> Result<()> {
    let report: TrainingReport = serde_json::from_str(&fs::read_to_string(&a.report)?)?;
    let t = match &a.tableau {
        Some(path) => parse_tableau(&fs::read_to_string(path)?)?,
        None => builtin(&report.method)?,
    };
    let spec = ProblemSpec::new(report.lambda, report.h)?;
    let theory = solve(&t, &spec, RootPolicy::All)?;
    let cmp = compare_with_theory(&report, &theory, &a.trajectory.config())?;
    if let Some(prefix) = &a.out {
        create_parent(prefix)?;
        fs::write(
            with_suffix(prefix, ".comparison.json"),
            serde_json::to_string_pretty(&cmp)? + "\n",
        )?;
        fs::write(with_suffix(prefix, ".trajectory.csv"), cmp.trajectory_csv())?;
    }
    emit(stdout, &cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("rklearn")
            .chain(args.iter().copied())
            .collect();
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn list_mentions_registry() {
        let (code, out, _) = run_str(&["list"]);
        assert_eq!(code, 0);
        let rk4 = out.lines().find(|l| l.starts_with("rk4")).unwrap();
        assert!(rk4.ends_with("order 4"), "{rk4}");
        assert!(out.contains("cheb2"));
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run_str(&["frobnicate"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["code"], "usage");
        assert_eq!(err.trim().lines().count(), 1);
    }

    #[test]
    fn solve_euler_at_i_pi() {
        let (code, out, _) = run_str(&[
            "solve",
            "--method",
            "explicit_euler",
            "--lambda",
            "0+3.14159265358979i",
            "--h",
            "1",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let sel = &v["selected"];
        assert!((sel[0].as_f64().unwrap() + 2.0).abs() < 1e-12);
        assert!(sel[1].as_f64().unwrap().abs() < 1e-12);
    }

    #[test]
    fn solve_at_zero_reports_undefined() {
        let (code, out, _) = run_str(&["solve", "--method", "rk4", "--lambda", "0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["coefficients"]["l_alpha"].is_null());
        assert_eq!(v["coefficients"]["reason"], "undefined");
    }

    #[test]
    fn bad_inputs_exit_two() {
        for args in [
            &["solve", "--method", "rk4", "--lambda", "1 + 2i"][..],
            &["solve", "--method", "nope", "--lambda", "1"][..],
            &["solve", "--method", "rk4", "--lambda", "1", "--h", "-1"][..],
            &["design", "--stages", "0"][..],
        ] {
            let (code, _, err) = run_str(args);
            assert_eq!(code, 2, "{args:?}: {err}");
            assert!(serde_json::from_str::<Value>(err.trim()).unwrap()["code"].is_string());
        }
    }

    #[test]
    fn computational_error_exits_one() {
        let (code, _, err) = run_str(&[
            "solve",
            "--method",
            "implicit_midpoint",
            "--lambda",
            "0+3.141592653589793i",
        ]);
        assert_eq!(code, 1, "{err}");
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["code"], "no_roots");
    }

    #[test]
    fn design_two_stages() {
        let (code, out, _) = run_str(&["design", "--stages", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["stability_poly"], json!(["1", "1", "1/8"]));
        assert!(v["realized_tableau"].is_object());
        assert_eq!(v["comparison"][1]["method"], "explicit_midpoint");
    }
}
