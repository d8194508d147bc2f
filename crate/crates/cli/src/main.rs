mod cache;
mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use torivan::cohomology::{
    h1_closed_form_onept, onept_lambda, search_box, verify_sweep, CohomologyEngine,
    CohomologyOptions, CohomologyReport, SweepGrid, SweepOptions, SweepSummary, DEFAULT_CAP,
    DEFAULT_MARGIN,
};
use torivan::divisor::divisor_from_params;
use torivan::lattice_fan::{make_blowup_fan, make_projective_fan, validate_fan};
use torivan::positivity::{onept_positivity_closed_form, positivity};
use torivan::{BlowupLayout, BlowupParams, Fan, ToricDivisor};

use cache::{cache_key, ReportCache};

#[derive(Parser)]
#[command(
    name = "torivan",
    version,
    about = "Positivity and line-bundle cohomology on toric blow-ups of P^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load) a fan and report its validation checks.
    Fan(FanArgs),
    /// Nef and ample verdicts with wall witnesses.
    Positivity(PositivityArgs),
    /// Total cohomology h^0..h^n with per-character contributions.
    Coh(CohArgs),
    /// Compare the vanishing predicates with enumeration over a parameter grid.
    Verify(VerifyArgs),
    /// Time the closed-form h^1 against enumeration on one-point blow-ups.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Number of blown-up points; 0 means P^n itself.
    #[arg(long, default_value_t = 1)]
    points: usize,
    /// Comma-separated multiplicities a_0,...,a_q.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Vec<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
}

#[derive(Args)]
struct FanArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    points: usize,
    /// Validate a fan JSON file instead of constructing one.
    #[arg(long, conflicts_with_all = ["n", "points"])]
    input: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PositivityArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Divisor JSON file; replaces --n/--points/--a/--b.
    #[arg(long)]
    divisor: Option<PathBuf>,
    /// Also evaluate the one-point closed form 0<=a<=b / 0<a<b.
    #[arg(long)]
    closed_form: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EngineArgs {
    /// Extra layers around the search box.
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: u32,
    /// Largest number of characters to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Args)]
struct CohArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    divisor: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Report cache directory.
    #[arg(long, env = "TORIVAN_CACHE")]
    cache: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    points: usize,
    /// Inclusive range for every a_i, e.g. -5..5.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    a_range: (i64, i64),
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    b_range: (i64, i64),
    /// Exit 1 on any disagreement or per-tuple error.
    #[arg(long)]
    strict: bool,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2..3")]
    a_range: (i64, i64),
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-1..2")]
    b_range: (i64, i64),
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, env = "TORIVAN_CACHE")]
    cache: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in {s:?}"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// Failures mapped onto exit codes: usage errors exit 2, the rest exit 1.
enum Failure {
    Usage(String),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<torivan::Error> for Failure {
    fn from(e: torivan::Error) -> Self {
        Failure::Compute(e.into())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Fan(a) => cmd_fan(a),
        Command::Positivity(a) => cmd_positivity(a),
        Command::Coh(a) => cmd_coh(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(output: &OutputArgs, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).context("writing stdout")?;
            out.flush().context("writing stdout")?;
        }
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn build_fan(n: usize, points: usize) -> CliResult<Fan> {
    if n < 3 {
        return usage(format!("--n must be at least 3, got {n}"));
    }
    if points > n + 1 {
        return usage(format!("--points must be at most n + 1 = {}", n + 1));
    }
    Ok(if points == 0 {
        make_projective_fan(n)?
    } else {
        make_blowup_fan(n, points)?
    })
}

/// Checks `--a`/`--b` against `--points` before any computation.
fn blowup_params(p: &ParamArgs) -> CliResult<BlowupParams> {
    if p.n < 3 {
        return usage(format!("--n must be at least 3, got {}", p.n));
    }
    if p.points == 0 || p.points > p.n + 1 {
        return usage(format!("--points must be in 1..={}", p.n + 1));
    }
    if p.a.len() != p.points {
        return usage(format!(
            "--a has {} value(s) but --points is {}",
            p.a.len(),
            p.points
        ));
    }
    let Some(b) = p.b else {
        return usage("--b is required");
    };
    Ok(BlowupParams::from_i64s(p.n, &p.a, b)?)
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Compute(anyhow!("parsing {}: {e}", path.display())))
}

/// Loads `{"fan": <fan or path>, "coeffs": {...}}`; a string fan is a
/// path relative to the divisor file.
fn load_divisor(path: &Path) -> CliResult<(Fan, ToricDivisor)> {
    let mut doc = read_json(path)?;
    if let Some(rel) = doc.get("fan").and_then(Value::as_str) {
        let fan_path = path.parent().unwrap_or(Path::new(".")).join(rel);
        doc["fan"] = read_json(&fan_path)?;
    }
    ToricDivisor::from_json(&doc)
        .with_context(|| format!("loading divisor {}", path.display()))
        .map_err(Failure::Compute)
}

/// The fan and divisor named by either `--divisor` or the blow-up params.
fn resolve_divisor(
    params: &ParamArgs,
    divisor: &Option<PathBuf>,
) -> CliResult<(Fan, ToricDivisor, Option<BlowupParams>)> {
    match divisor {
        Some(path) => {
            if !params.a.is_empty() || params.b.is_some() {
                return usage("--divisor cannot be combined with --a/--b");
            }
            let (fan, d) = load_divisor(path)?;
            Ok((fan, d, None))
        }
        None => {
            let p = blowup_params(params)?;
            let fan = make_blowup_fan(p.n, p.points)?;
            let d = divisor_from_params(&fan, &p)?;
            Ok((fan, d, Some(p)))
        }
    }
}

fn cmd_fan(args: FanArgs) -> CliResult<ExitCode> {
    let fan = match &args.input {
        Some(path) => Fan::from_json(&read_json(path)?)?,
        None => build_fan(args.n, args.points)?,
    };
    let validation = validate_fan(&fan);
    let text = match args.output.format {
        Format::Json => {
            pretty(&json!({ "fan": fan.to_json(), "validation": validation.to_json() }))
        }
        Format::Csv => render::fan_csv(&fan),
        Format::Text => render::fan_text(&fan, &validation),
    };
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_positivity(args: PositivityArgs) -> CliResult<ExitCode> {
    let (fan, d, params) = resolve_divisor(&args.params, &args.divisor)?;
    let closed = if args.closed_form {
        match &params {
            Some(p) if p.points == 1 => Some(onept_positivity_closed_form(&p.a[0], &p.b)),
            _ => return usage("--closed-form needs --points 1 with --a/--b"),
        }
    } else {
        None
    };
    let verdict = positivity(&fan, &d)?;
    let mut v = verdict.to_json(&fan);
    v["divisor"] = d.coeffs_json();
    if let Some(p) = &params {
        v["params"] = p.to_json();
    }
    if let Some((nef, ample)) = closed {
        v["closed_form"] = json!({
            "nef": nef,
            "ample": ample,
            "agree": nef == verdict.nef && ample == verdict.ample,
        });
    }
    let text = match args.output.format {
        Format::Json => pretty(&v),
        Format::Csv => render::positivity_csv(&verdict, closed),
        Format::Text => render::positivity_text(&fan, &d, &verdict, closed),
    };
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Runs (or fetches) a report. Returns the report and whether it came
/// from the cache.
fn cohomology_report(
    fan: &Fan,
    d: &ToricDivisor,
    engine: &EngineArgs,
    cache: Option<&ReportCache>,
) -> CliResult<(CohomologyReport, bool)> {
    let key = cache_key(fan, d, engine.margin);
    if let Some(c) = cache {
        if let Some(r) = c.get(&key) {
            if r.fan == *fan && r.divisor == *d {
                return Ok((r, true));
            }
        }
    }
    let opts = CohomologyOptions {
        margin: engine.margin,
        cap: engine.cap,
    };
    let report = CohomologyEngine::new(fan.clone()).report(d, opts)?;
    if let Some(c) = cache {
        c.put(&key, &report)?;
    }
    Ok((report, false))
}

fn render_report(report: &CohomologyReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&report.to_json()),
        Format::Csv => render::report_csv(report),
        Format::Text => render::report_text(report),
    }
}

fn cmd_coh(args: CohArgs) -> CliResult<ExitCode> {
    let (fan, d, _) = resolve_divisor(&args.params, &args.divisor)?;
    let cache = args.cache.as_deref().map(ReportCache::open).transpose()?;
    let (report, _) = cohomology_report(&fan, &d, &args.engine, cache.as_ref())?;
    emit(&args.output, &render_report(&report, args.output.format))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    if args.n < 3 {
        return usage(format!("--n must be at least 3, got {}", args.n));
    }
    if args.points == 0 || args.points > args.n + 1 {
        return usage(format!("--points must be in 1..={}", args.n + 1));
    }
    let grid = SweepGrid {
        n: args.n,
        points: args.points,
        a_range: args.a_range,
        b_range: args.b_range,
    };
    let opts = SweepOptions {
        margin: args.engine.margin,
        cap: args.engine.cap,
        jobs: args.jobs,
    };
    let verdicts = verify_sweep(&grid, opts)?;
    let summary = SweepSummary::of(&verdicts);
    let text = match args.output.format {
        Format::Json => pretty(&torivan::cohomology::sweep_to_json(&verdicts)),
        Format::Csv => render::sweep_csv(&verdicts),
        Format::Text => render::sweep_text(&verdicts, &summary),
    };
    emit(&args.output, &text)?;
    if args.strict && (summary.disagree > 0 || summary.errors > 0) {
        eprintln!(
            "strict: {} disagreement(s), {} error(s)",
            summary.disagree, summary.errors
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// One timed pipeline run in the benchmark table.
pub struct BenchRow {
    pub a: i64,
    pub b: i64,
    pub pipeline: &'static str,
    pub h1: BigInt,
    pub characters: BigInt,
    pub micros: u128,
    pub cache_hit: Option<bool>,
    pub report_sha256: Option<String>,
}

fn cmd_bench(args: BenchArgs) -> CliResult<ExitCode> {
    let fan = build_fan(args.n, 1)?;
    let layout = BlowupLayout::new(args.n, 1)?;
    let cache = args.cache.as_deref().map(ReportCache::open).transpose()?;
    let mut rows = Vec::new();
    for a in args.a_range.0..=args.a_range.1 {
        for b in args.b_range.0..=args.b_range.1 {
            let p = BlowupParams::from_i64s(args.n, &[a], b)?;
            let d = divisor_from_params(&fan, &p)?;

            let start = Instant::now();
            let closed = h1_closed_form_onept(args.n, &onept_lambda(layout, &d)?)?;
            rows.push(BenchRow {
                a,
                b,
                pipeline: "closed_form",
                h1: closed,
                characters: BigInt::from(0),
                micros: start.elapsed().as_micros(),
                cache_hit: None,
                report_sha256: None,
            });

            let start = Instant::now();
            let (report, hit) = cohomology_report(&fan, &d, &args.engine, cache.as_ref())?;
            let micros = start.elapsed().as_micros();
            let characters = if hit {
                BigInt::from(0)
            } else {
                search_box(&fan, &d, args.engine.margin)?.volume()
            };
            let bytes = render_report(&report, Format::Json);
            rows.push(BenchRow {
                a,
                b,
                pipeline: "enumeration",
                h1: BigInt::from(report.dims[1]),
                characters,
                micros,
                cache_hit: Some(hit),
                report_sha256: Some(hex::encode(Sha256::digest(bytes.as_bytes()))),
            });
        }
    }
    let text = match args.output.format {
        Format::Json => pretty(&render::bench_json(args.n, &rows)),
        Format::Csv => render::bench_csv(&rows),
        Format::Text => render::bench_text(&rows),
    };
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}
