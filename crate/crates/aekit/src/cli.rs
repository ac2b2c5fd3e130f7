//! Command-line front end.
//!
//! Subcommand groups: `ae` (solve/gap/certify), `metric` (rho/hausdorff),
//! `regularity check`, `stability run`, `lsc probe`, `reduce`
//! (gnep/relation), and `slmfg` (solve/probe). All commands read `-` as
//! stdin, emit canonical JSON on stdout (or to `-o PATH`), and exit with:
//! 0 on success, 1 when `--require-solution` is set and no solution or
//! equilibrium exists, 2 on invalid input, 3 when `regularity check` fails.
//!
//! `--threads N` (or `AEKIT_THREADS`) bounds internal parallelism; reports
//! are byte-identical for any thread count.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::economy::{
    parse_problem, profile_point_json, validate_economy, EconomyProfile, ProfilePoint,
    ToleranceConfig,
};
use crate::equilibrium::{certify, ne_oracle, ne_via_gap, Certificate, EquilibriumSet};
use crate::error::{Error, Result};
use crate::gapfun::{gap_sweep, GapEvaluation};
use crate::jio::JsonValue;
use crate::profiles::{
    check_regularity, default_ambient, lsc_probe, parse_family, rho, stability_experiment,
    AlphaEstimate, ProfileFamily, TauEstimate, Verdict,
};
use crate::setval::{hausdorff, FiniteCloud, Point, Window};
use crate::slmfg::{parse_slmfg, signal_continuity_probe, solve_slmfg, Mode};

#[derive(Parser)]
#[command(
    name = "aekit",
    about = "Equilibria of abstract economies, profile metrics, and leader-follower games",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Tolerance overrides, e.g. --tolerances feas=1e-6,gap_zero=1e-6
    #[arg(long, global = true, value_name = "K=V,...")]
    tolerances: Option<String>,

    /// Thread budget for internal parallelism (default: AEKIT_THREADS or
    /// the rayon default)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Pretty-print the JSON report
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the report to a file instead of stdout
    #[arg(short = 'o', long = "output", global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Abstract-economy commands
    #[command(subcommand)]
    Ae(AeCommand),
    /// Distances between clouds and between profiles
    #[command(subcommand)]
    Metric(MetricCommand),
    /// Regularity certification of profile families
    #[command(subcommand)]
    Regularity(RegularityCommand),
    /// Equilibrium-set stability experiments
    #[command(subcommand)]
    Stability(StabilityCommand),
    /// Gap-function lower-semicontinuity probes
    #[command(subcommand)]
    Lsc(LscCommand),
    /// Build abstract economies from other game formats
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Single-leader multi-follower games
    #[command(subcommand)]
    Slmfg(SlmfgCommand),
}

#[derive(Subcommand)]
enum AeCommand {
    /// Compute the equilibrium set of a problem file
    Solve(AeSolveArgs),
    /// Evaluate the gap function (whole grid, or one point)
    Gap(AeGapArgs),
    /// Certify one profile point
    Certify(AeCertifyArgs),
}

#[derive(Args)]
struct AeSolveArgs {
    /// Problem file (- for stdin)
    input: String,
    /// Route: oracle (condition scan) or gap (gap-function zero set)
    #[arg(long, default_value = "oracle")]
    method: String,
    /// Exit 1 when the equilibrium set is empty
    #[arg(long)]
    require_solution: bool,
}

#[derive(Args)]
struct AeGapArgs {
    input: String,
    /// Profile point as nested JSON coords, e.g. [[0.0],[1.0]]
    #[arg(long, value_name = "JSON")]
    point: Option<String>,
}

#[derive(Args)]
struct AeCertifyArgs {
    input: String,
    #[arg(long, value_name = "JSON")]
    point: String,
}

#[derive(Subcommand)]
enum MetricCommand {
    /// Profile distance between two problem files
    Rho { a: String, b: String },
    /// Hausdorff distance between two cloud files
    Hausdorff { a: String, b: String },
}

#[derive(Subcommand)]
enum RegularityCommand {
    /// Estimate the separation and inflation constants of a family
    Check(RegularityArgs),
}

#[derive(Args)]
struct RegularityArgs {
    /// Family file (- for stdin)
    family: String,
    /// Radii for the inflation estimate
    #[arg(long, value_name = "V1,V2,...", default_value = "0.25,0.5,1.0")]
    eps_grid: String,
    /// Ambient cloud file; defaults to the union of grids and map values
    #[arg(long, value_name = "PATH")]
    ambient: Option<String>,
}

#[derive(Subcommand)]
enum StabilityCommand {
    /// Trace equilibrium-set excesses along a family
    Run(FamilyWindowArgs),
}

#[derive(Args)]
struct FamilyWindowArgs {
    family: String,
    /// Member range a..b (default: the whole family)
    #[arg(long, value_name = "A..B")]
    window: Option<String>,
}

#[derive(Subcommand)]
enum LscCommand {
    /// Check that tail gaps do not undercut the limit gap
    Probe(LscArgs),
}

#[derive(Args)]
struct LscArgs {
    family: String,
    #[arg(long, value_name = "A..B")]
    window: Option<String>,
    /// Allowed undercut; defaults to twice the tail profile distance
    #[arg(long)]
    slack: Option<f64>,
    /// Evaluation point (constant sequence); defaults to the first
    /// equilibrium of the limit, else the first grid profile
    #[arg(long, value_name = "JSON")]
    point: Option<String>,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Epsilon-GNEP to abstract economy
    Gnep(ReduceGnepArgs),
    /// Dominance relation to abstract economy
    Relation(ReduceRelationArgs),
}

#[derive(Args)]
struct ReduceGnepArgs {
    input: String,
    /// Override the file's epsilon
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct ReduceRelationArgs {
    input: String,
}

#[derive(Subcommand)]
enum SlmfgCommand {
    /// Minimize the leader objective over the response graph
    Solve(SlmfgSolveArgs),
    /// Probe continuity of the signal map along a leader sequence
    Probe(SlmfgProbeArgs),
}

#[derive(Args)]
struct SlmfgSolveArgs {
    input: String,
    #[arg(long, default_value = "optimistic")]
    mode: String,
    /// Exit 1 on NO-SOLUTION
    #[arg(long)]
    require_solution: bool,
}

#[derive(Args)]
struct SlmfgProbeArgs {
    input: String,
    /// Omega positions of the sequence, e.g. 0,1,2 (default: constant
    /// at the target)
    #[arg(long, value_name = "I,J,...")]
    w_seq: Option<String>,
    /// Omega position of the target (default 0)
    #[arg(long, default_value_t = 0)]
    w_hat: usize,
    #[arg(long, value_name = "A..B")]
    window: Option<String>,
    /// Pass threshold on the tail profile distances (default: the follower
    /// feas tolerance)
    #[arg(long)]
    tol: Option<f64>,
}

/// Runs the command line and returns the process exit code. Reports go to
/// stdout (or `-o`), diagnostics to stderr.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };

    let outcome = match cli.threads.or_else(env_threads) {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::invalid(format!("cannot build thread pool: {e}"))),
        },
        _ => dispatch(&cli),
    };

    match outcome {
        Ok((report, code)) => {
            let text = crate::jio::to_string(&report, cli.pretty);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write `{}`: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn env_threads() -> Option<usize> {
    std::env::var("AEKIT_THREADS").ok()?.parse().ok()
}

fn dispatch(cli: &Cli) -> Result<(JsonValue, i32)> {
    let overrides = cli
        .tolerances
        .as_deref()
        .map(parse_tolerance_overrides)
        .transpose()?;
    match &cli.command {
        Command::Ae(AeCommand::Solve(args)) => ae_solve(args, overrides),
        Command::Ae(AeCommand::Gap(args)) => ae_gap(args, overrides),
        Command::Ae(AeCommand::Certify(args)) => ae_certify(args, overrides),
        Command::Metric(MetricCommand::Rho { a, b }) => metric_rho(a, b, overrides),
        Command::Metric(MetricCommand::Hausdorff { a, b }) => metric_hausdorff(a, b),
        Command::Regularity(RegularityCommand::Check(args)) => regularity_check(args),
        Command::Stability(StabilityCommand::Run(args)) => stability_run(args),
        Command::Lsc(LscCommand::Probe(args)) => lsc_run(args),
        Command::Reduce(ReduceCommand::Gnep(args)) => reduce_gnep(args),
        Command::Reduce(ReduceCommand::Relation(args)) => reduce_relation(args),
        Command::Slmfg(SlmfgCommand::Solve(args)) => slmfg_solve(args),
        Command::Slmfg(SlmfgCommand::Probe(args)) => slmfg_probe(args),
    }
}

// ---------------------------------------------------------------------------
// Input plumbing
// ---------------------------------------------------------------------------

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))
    }
}

fn input_dir(path: &str) -> Option<PathBuf> {
    if path == "-" {
        None
    } else {
        Path::new(path).parent().map(|p| p.to_path_buf())
    }
}

fn parse_tolerance_overrides(text: &str) -> Result<Vec<(String, f64)>> {
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("tolerance override `{part}` is not k=v")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| Error::invalid(format!("tolerance `{key}`: {e}")))?;
            Ok((key.trim().to_string(), value))
        })
        .collect()
}

fn apply_overrides(
    mut config: ToleranceConfig,
    overrides: &Option<Vec<(String, f64)>>,
) -> Result<ToleranceConfig> {
    if let Some(pairs) = overrides {
        for (key, value) in pairs {
            match key.as_str() {
                "dedup" => config.dedup = *value,
                "feas" => config.feas = *value,
                "intersect" => config.intersect = *value,
                "gap_zero" => config.gap_zero = *value,
                other => {
                    return Err(Error::invalid(format!(
                        "unknown tolerance `{other}` (use dedup|feas|intersect|gap_zero)"
                    )))
                }
            }
        }
        config.validate()?;
    }
    Ok(config)
}

fn load_problem(path: &str, overrides: &Option<Vec<(String, f64)>>) -> Result<EconomyProfile> {
    let profile = parse_problem(&read_input(path)?)?;
    match overrides {
        Some(_) => profile.with_tolerances(apply_overrides(*profile.tolerances(), overrides)?),
        None => Ok(profile),
    }
}

fn load_valid_problem(
    path: &str,
    overrides: &Option<Vec<(String, f64)>>,
) -> Result<EconomyProfile> {
    let profile = load_problem(path, overrides)?;
    let report = validate_economy(&profile);
    if let Some(first) = report.violations.first() {
        return Err(Error::validation(first.message.clone()));
    }
    Ok(profile)
}

fn parse_point_arg(profile: &EconomyProfile, text: &str) -> Result<ProfilePoint> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text)
        .map_err(|e| Error::invalid(format!("point must be nested coords [[..],..]: {e}")))?;
    if rows.len() != profile.player_count() {
        return Err(Error::invalid(format!(
            "point has {} components, expected {}",
            rows.len(),
            profile.player_count()
        )));
    }
    let components = rows
        .into_iter()
        .map(Point::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfilePoint::new(components))
}

fn load_cloud(path: &str) -> Result<FiniteCloud> {
    #[derive(serde::Deserialize)]
    struct CloudFile {
        dim: usize,
        points: Vec<Vec<f64>>,
    }
    let text = read_input(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    match value {
        serde_json::Value::Array(_) => {
            let rows: Vec<Vec<f64>> = serde_json::from_value(value)?;
            let dim = rows
                .first()
                .map(|r| r.len())
                .ok_or_else(|| Error::parse("empty bare cloud; use {\"dim\":.., \"points\":[]}"))?;
            FiniteCloud::from_coords(dim, &rows)
        }
        other => {
            let file: CloudFile = serde_json::from_value(other)?;
            FiniteCloud::from_coords(file.dim, &file.points)
        }
    }
}

fn parse_window_arg(text: &Option<String>, default_end: usize) -> Result<Window> {
    match text {
        Some(t) => Window::parse(t),
        None => Window::new(1, default_end.max(1)),
    }
}

fn parse_eps_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("eps grid entry `{part}`: {e}")))
        })
        .collect()
}

fn load_family(path: &str) -> Result<ProfileFamily> {
    parse_family(&read_input(path)?, input_dir(path).as_deref())
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

fn certificate_json(cert: &Certificate) -> JsonValue {
    JsonValue::obj(vec![
        ("accepted", JsonValue::Bool(cert.accepted)),
        (
            "players",
            JsonValue::Arr(
                cert.players
                    .iter()
                    .map(|p| {
                        JsonValue::obj(vec![
                            (
                                "feasibility_residual",
                                JsonValue::Num(p.feasibility_residual),
                            ),
                            ("min_pair_distance", JsonValue::Num(p.min_pair_distance)),
                            ("player", JsonValue::Str(p.player.to_string())),
                            (
                                "violating_pair",
                                match &p.violating_pair {
                                    Some((a, b)) => JsonValue::Arr(vec![
                                        crate::economy::point_json(a),
                                        crate::economy::point_json(b),
                                    ]),
                                    None => JsonValue::Null,
                                },
                            ),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn evaluation_json(eval: &GapEvaluation) -> JsonValue {
    JsonValue::obj(vec![
        ("gap", JsonValue::Num(eval.gap)),
        ("point", profile_point_json(&eval.point)),
        (
            "players",
            JsonValue::Arr(
                eval.players
                    .iter()
                    .map(|p| {
                        JsonValue::obj(vec![
                            (
                                "candidates",
                                crate::economy::cloud_json(&p.candidates),
                            ),
                            ("improvement", JsonValue::Bool(p.improvement)),
                            ("player", JsonValue::Str(p.player.to_string())),
                            ("residual", JsonValue::Num(p.residual)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn equilibrium_report(profile: &EconomyProfile, set: &EquilibriumSet) -> Result<JsonValue> {
    let mut certificates = Vec::with_capacity(set.points.len());
    for x in &set.points {
        certificates.push(certificate_json(&certify(profile, x)?));
    }
    let gaps: Vec<JsonValue> = match &set.evaluations {
        Some(evals) => evals.iter().map(|e| JsonValue::Num(e.gap)).collect(),
        None => Vec::new(),
    };
    Ok(JsonValue::obj(vec![
        ("certificates", JsonValue::Arr(certificates)),
        (
            "equilibria",
            JsonValue::Arr(set.points.iter().map(profile_point_json).collect()),
        ),
        ("gaps", JsonValue::Arr(gaps)),
        ("method", JsonValue::Str(set.method.to_string())),
    ]))
}

fn verdict_json(verdict: Verdict) -> JsonValue {
    JsonValue::Str(verdict.to_string())
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

fn ae_solve(args: &AeSolveArgs, overrides: Option<Vec<(String, f64)>>) -> Result<(JsonValue, i32)> {
    let profile = load_valid_problem(&args.input, &overrides)?;
    let set = match args.method.as_str() {
        "oracle" => ne_oracle(&profile)?,
        "gap" => ne_via_gap(&profile)?,
        other => {
            return Err(Error::invalid(format!(
                "method must be oracle or gap, got `{other}`"
            )))
        }
    };
    let report = equilibrium_report(&profile, &set)?;
    let code = if args.require_solution && set.is_empty() {
        1
    } else {
        0
    };
    Ok((report, code))
}

fn ae_gap(args: &AeGapArgs, overrides: Option<Vec<(String, f64)>>) -> Result<(JsonValue, i32)> {
    let profile = load_valid_problem(&args.input, &overrides)?;
    let evaluations = match &args.point {
        Some(text) => {
            let point = parse_point_arg(&profile, text)?;
            vec![crate::gapfun::gap(&profile, &point)?]
        }
        None => gap_sweep(&profile)?,
    };
    Ok((
        JsonValue::obj(vec![(
            "evaluations",
            JsonValue::Arr(evaluations.iter().map(evaluation_json).collect()),
        )]),
        0,
    ))
}

fn ae_certify(
    args: &AeCertifyArgs,
    overrides: Option<Vec<(String, f64)>>,
) -> Result<(JsonValue, i32)> {
    let profile = load_problem(&args.input, &overrides)?;
    let point = parse_point_arg(&profile, &args.point)?;
    let cert = certify(&profile, &point)?;
    Ok((certificate_json(&cert), 0))
}

fn metric_rho(
    a: &str,
    b: &str,
    overrides: Option<Vec<(String, f64)>>,
) -> Result<(JsonValue, i32)> {
    let pa = load_problem(a, &overrides)?;
    let pb = load_problem(b, &overrides)?;
    let value = rho(&pa, &pb)?;
    Ok((JsonValue::obj(vec![("rho", JsonValue::Num(value))]), 0))
}

fn metric_hausdorff(a: &str, b: &str) -> Result<(JsonValue, i32)> {
    let ca = load_cloud(a)?;
    let cb = load_cloud(b)?;
    let value = hausdorff(&ca, &cb)?;
    Ok((
        JsonValue::obj(vec![("hausdorff", JsonValue::Num(value))]),
        0,
    ))
}

fn regularity_check(args: &RegularityArgs) -> Result<(JsonValue, i32)> {
    let family = load_family(&args.family)?;
    let eps_grid = parse_eps_grid(&args.eps_grid)?;
    let ambient = match &args.ambient {
        Some(path) => {
            let cloud = load_cloud(path)?;
            family
                .base()
                .players()
                .iter()
                .map(|p| {
                    if p.dim() == cloud.dim() {
                        Ok(cloud.clone())
                    } else {
                        Err(Error::DimensionMismatch {
                            expected: p.dim(),
                            found: cloud.dim(),
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => default_ambient(&family)?,
    };
    let cert = check_regularity(&family, &eps_grid, &ambient)?;
    let tau_json = match &cert.tau {
        TauEstimate::Pass { value } => JsonValue::obj(vec![
            ("status", JsonValue::Str("PASS".into())),
            ("value", JsonValue::Num(*value)),
        ]),
        TauEstimate::Fail { witness } => JsonValue::obj(vec![
            ("status", JsonValue::Str("FAIL".into())),
            (
                "witness",
                JsonValue::obj(vec![
                    (
                        "member",
                        match witness.member {
                            Some(n) => JsonValue::Int(n as i64),
                            None => JsonValue::Str("limit".into()),
                        },
                    ),
                    ("player", JsonValue::Str(witness.player.to_string())),
                    ("point", profile_point_json(&witness.point)),
                ]),
            ),
        ]),
    };
    let alpha_json = match &cert.alpha {
        AlphaEstimate::Pass { value } => JsonValue::obj(vec![
            ("status", JsonValue::Str("PASS".into())),
            ("value", JsonValue::Num(*value)),
        ]),
        AlphaEstimate::Fail { detail } => JsonValue::obj(vec![
            ("detail", JsonValue::Str(detail.clone())),
            ("status", JsonValue::Str("FAIL".into())),
        ]),
    };
    let passed = cert.passed();
    let report = JsonValue::obj(vec![
        ("alpha", alpha_json),
        ("eps_grid", JsonValue::floats(&cert.eps_grid)),
        ("tau", tau_json),
        (
            "verdict",
            JsonValue::Str(if passed { "PASS" } else { "FAIL" }.into()),
        ),
    ]);
    Ok((report, if passed { 0 } else { 3 }))
}

fn stability_run(args: &FamilyWindowArgs) -> Result<(JsonValue, i32)> {
    let family = load_family(&args.family)?;
    let window = parse_window_arg(&args.window, family.len())?;
    let report = stability_experiment(&family, window)?;
    Ok((
        JsonValue::obj(vec![
            ("excess_trace", JsonValue::floats(&report.excess_trace)),
            ("gap_traces", JsonValue::Arr(Vec::new())),
            ("rho_trace", JsonValue::floats(&report.rho_trace)),
            ("verdict", verdict_json(report.verdict)),
            ("window", JsonValue::Str(report.window.to_string())),
        ]),
        0,
    ))
}

fn lsc_run(args: &LscArgs) -> Result<(JsonValue, i32)> {
    let family = load_family(&args.family)?;
    let window = parse_window_arg(&args.window, family.len())?;
    let limit = family.limit_or_base();
    let point = match &args.point {
        Some(text) => parse_point_arg(limit, text)?,
        None => {
            let ne = ne_oracle(limit)?;
            match ne.points.first() {
                Some(x) => x.clone(),
                None => limit.point_at(&limit.unrank_full(0)),
            }
        }
    };
    let sequence = vec![point.clone(); window.len()];
    let report = lsc_probe(&family, &sequence, &point, window, args.slack)?;
    Ok((
        JsonValue::obj(vec![
            ("excess_trace", JsonValue::Arr(Vec::new())),
            ("gap_traces", JsonValue::floats(&report.gap_trace)),
            ("limit_gap", JsonValue::Num(report.limit_gap)),
            ("point", profile_point_json(&point)),
            ("rho_trace", JsonValue::Arr(Vec::new())),
            ("slack", JsonValue::Num(report.slack)),
            ("verdict", verdict_json(report.verdict)),
            ("window", JsonValue::Str(report.window.to_string())),
        ]),
        0,
    ))
}

fn reduce_gnep(args: &ReduceGnepArgs) -> Result<(JsonValue, i32)> {
    let mut spec = crate::reductions::parse_gnep(&read_input(&args.input)?)?;
    if let Some(eps) = args.epsilon {
        spec = spec.with_epsilon(eps)?;
    }
    let profile = crate::reductions::from_gnep(&spec)?;
    // Emit the problem itself so the output pipes into `ae solve -`.
    Ok((crate::economy::problem_json(&profile), 0))
}

fn reduce_relation(args: &ReduceRelationArgs) -> Result<(JsonValue, i32)> {
    let spec = crate::reductions::parse_relation(&read_input(&args.input)?)?;
    let profile = crate::reductions::from_relation(&spec)?;
    Ok((crate::economy::problem_json(&profile), 0))
}

fn slmfg_solve(args: &SlmfgSolveArgs) -> Result<(JsonValue, i32)> {
    let problem = parse_slmfg(&read_input(&args.input)?, input_dir(&args.input).as_deref())?;
    let mode: Mode = args.mode.parse()?;
    let solution = solve_slmfg(&problem, mode)?;
    let report = match &solution {
        Some(s) => JsonValue::obj(vec![
            ("graph_size", JsonValue::Int(s.graph_size as i64)),
            ("mode", JsonValue::Str(s.mode.to_string())),
            (
                "per_w_counts",
                JsonValue::Arr(
                    s.per_w_counts
                        .iter()
                        .map(|&c| JsonValue::Int(c as i64))
                        .collect(),
                ),
            ),
            ("status", JsonValue::Str("solution".into())),
            ("value", JsonValue::Num(s.value)),
            ("w", crate::economy::point_json(&s.w)),
            ("x", profile_point_json(&s.x)),
        ]),
        None => JsonValue::obj(vec![
            ("graph_size", JsonValue::Int(0)),
            ("mode", JsonValue::Str(mode.to_string())),
            (
                "per_w_counts",
                JsonValue::Arr(
                    problem
                        .omega()
                        .iter()
                        .map(|_| JsonValue::Int(0))
                        .collect(),
                ),
            ),
            ("status", JsonValue::Str("no-solution".into())),
        ]),
    };
    let code = if args.require_solution && solution.is_none() {
        1
    } else {
        0
    };
    Ok((report, code))
}

fn slmfg_probe(args: &SlmfgProbeArgs) -> Result<(JsonValue, i32)> {
    let problem = parse_slmfg(&read_input(&args.input)?, input_dir(&args.input).as_deref())?;
    let sequence: Vec<usize> = match &args.w_seq {
        Some(text) => text
            .split(',')
            .filter(|part| !part.trim().is_empty())
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::invalid(format!("w sequence entry `{part}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![args.w_hat; 8],
    };
    let window = parse_window_arg(&args.window, sequence.len())?;
    let report = signal_continuity_probe(&problem, &sequence, args.w_hat, window, args.tol)?;
    Ok((
        JsonValue::obj(vec![
            ("ne_excess_trace", JsonValue::floats(&report.ne_excess_trace)),
            ("rho_trace", JsonValue::floats(&report.rho_trace)),
            ("tol", JsonValue::Num(report.tol)),
            ("verdict", verdict_json(report.verdict)),
            ("window", JsonValue::Str(report.window.to_string())),
        ]),
        0,
    ))
}
