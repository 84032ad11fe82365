//! `asr-fis`: run the speech-accuracy fuzzy system, sweep its response
//! surface, check framing arithmetic and verify claims over result tables.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 failed
//! claim check under `--strict`. Numbers print with 4 decimals.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asr_fis::dataio::{
    accuracy_argmax_report, lint_records, load_table_csv, read_records, snr_peak_check, ClaimReport, GroupBy,
};
use asr_fis::framing::{frame_plan, frame_size_literal, SignalSpec};
use asr_fis::sweep::{argmax, build_grid, evaluate_surface, feasible_region, write_csv, write_json, AxisSpec};
use asr_fis::sweep::{COARSE_AXES, FINE_AXES};
use asr_fis::{parse_fis, serialize_fis, table_fixture, Engine, FisDefinition, ParseIssue, SPEECH_ACCURACY_FIS};
use clap::{Args, Parser, Subcommand, ValueEnum};

const RESOLUTION_ENV: &str = "ASR_FIS_RESOLUTION";

#[derive(Debug, Parser)]
#[command(
    name = "asr-fis",
    version,
    about = "Fuzzy front-end parameter tuning for speech recognition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Predict recognition accuracy for one (environment, window, overlap) triple.
    Infer(InferArgs),
    /// Parse and validate a .fis file.
    Parse(ParseArgs),
    /// Evaluate the response surface over a grid.
    Sweep(SweepArgs),
    /// Frame layout for a signal length, window and overlap.
    Frame(FrameArgs),
    /// Check trend claims over a result table.
    Tables(TablesArgs),
}

#[derive(Debug, Args)]
struct FisArgs {
    /// System definition; the bundled SpeechAccuracy system when omitted.
    #[arg(long, value_name = "FILE")]
    fis: Option<PathBuf>,
    /// Centroid sample count (odd, at least 11).
    #[arg(long, env = RESOLUTION_ENV, default_value_t = asr_fis::DEFAULT_RESOLUTION)]
    resolution: usize,
}

#[derive(Debug, Args)]
struct InferArgs {
    #[command(flatten)]
    fis: FisArgs,
    /// Environment clean degree (dB).
    #[arg(long, allow_negative_numbers = true)]
    env: f64,
    /// Window size (samples).
    #[arg(long, allow_negative_numbers = true)]
    win: f64,
    /// Frame overlap (%).
    #[arg(long, allow_negative_numbers = true)]
    overlap: f64,
    /// Also print memberships and rule strengths.
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Args)]
struct ParseArgs {
    /// File to check; the bundled system when omitted.
    #[arg(long, value_name = "FILE")]
    fis: Option<PathBuf>,
    /// Print the normalized .fis text after a successful parse.
    #[arg(long)]
    serialize: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SurfaceFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    fis: FisArgs,
    /// Environment axis as lo:hi:step.
    #[arg(long, value_name = "LO:HI:STEP")]
    env: Option<AxisSpec>,
    /// Window axis as lo:hi:step.
    #[arg(long, value_name = "LO:HI:STEP")]
    win: Option<AxisSpec>,
    /// Overlap axis as lo:hi:step.
    #[arg(long, value_name = "LO:HI:STEP")]
    overlap: Option<AxisSpec>,
    /// Default to the 1 dB / 1 sample / 0.5 % grid instead of 5 / 5 / 5.
    #[arg(long)]
    fine: bool,
    /// Write every surface point here.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SurfaceFormat::Csv)]
    format: SurfaceFormat,
    /// Accuracy bound for the feasible region.
    #[arg(long, default_value_t = 98.0)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct FrameArgs {
    /// Sampling rate (Hz).
    #[arg(long, default_value_t = 8000)]
    rate: u32,
    /// Signal length (samples).
    #[arg(long)]
    length: usize,
    /// Window length (samples).
    #[arg(long)]
    window: usize,
    /// Frame overlap (%), in [0, 100).
    #[arg(long)]
    overlap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    SnrPeak,
    AccArgmax,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Grouping {
    Auto,
    Window,
    Digit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct TablesArgs {
    /// Table CSV; bundled table 1 when neither this nor --table is given.
    #[arg(long, value_name = "FILE", conflicts_with = "table")]
    csv: Option<PathBuf>,
    /// Bundled table number.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    table: Option<u8>,
    #[arg(long, value_enum, default_value_t = Check::All)]
    check: Check,
    #[arg(long, value_enum, default_value_t = Grouping::Auto)]
    group_by: Grouping,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Exit 3 when any checked group fails.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Claim,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Claim => 3,
        }
    }
}

fn data(err: impl std::fmt::Display) -> Failure {
    Failure::Data(err.to_string())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Infer(a) => infer(a, &mut out),
        Command::Parse(a) => parse(a, &mut out),
        Command::Sweep(a) => sweep(a, &mut out),
        Command::Frame(a) => frame(a, &mut out),
        Command::Tables(a) => tables(a, &mut out),
    };
    let flushed = out.flush();
    match result.and_then(|()| flushed.map_err(data)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}\n\nRun with --help for usage."),
                Failure::Data(m) => eprintln!("error: {m}"),
                Failure::Claim => eprintln!("error: claim check failed (--strict)"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn read_fis_text(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        None => Ok(SPEECH_ACCURACY_FIS.to_string()),
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Data(format!("cannot read {}: {e}", p.display()))),
    }
}

fn source_name(path: Option<&Path>) -> String {
    path.map_or_else(|| "<bundled>".to_string(), |p| p.display().to_string())
}

fn render_issues(source: &str, issues: &[ParseIssue]) -> String {
    issues.iter().fold(String::new(), |mut s, i| {
        let _ = writeln!(s, "{source}: {i}");
        s
    })
}

fn load_fis(args: &FisArgs) -> Result<FisDefinition, Failure> {
    let path = args.fis.as_deref();
    let text = read_fis_text(path)?;
    match parse_fis(&text) {
        Ok(parsed) => {
            // the bundled system's warnings are known; `parse` still lists them
            if path.is_some() {
                eprint!("{}", render_issues(&source_name(path), &parsed.warnings));
            }
            Ok(parsed.fis)
        }
        Err(issues) => {
            let msg = render_issues(&source_name(path), &issues);
            Err(Failure::Data(format!("invalid fuzzy system\n{}", msg.trim_end())))
        }
    }
}

fn check_resolution(n: usize) -> Outcome {
    if n < 11 || n.is_multiple_of(2) {
        return Err(Failure::Usage(format!(
            "resolution must be odd and at least 11, got {n} (set by --resolution or {RESOLUTION_ENV})"
        )));
    }
    Ok(())
}

fn infer(a: InferArgs, out: &mut impl Write) -> Outcome {
    check_resolution(a.fis.resolution)?;
    let fis = load_fis(&a.fis)?;
    let engine = Engine::new(&fis, a.fis.resolution).map_err(data)?;
    let trace = engine.infer(&[a.env, a.win, a.overlap]).map_err(data)?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(data);

    for (var, o) in fis.outputs.iter().zip(&trace.outputs) {
        w(out, format!("{} {:.4}", var.name, o.crisp))?;
    }
    w(out, format!("fired {}", trace.fired))?;
    if !a.trace {
        return Ok(());
    }
    for (i, var) in fis.inputs.iter().enumerate() {
        let note = if trace.clamped[i] { " (clamped)" } else { "" };
        w(out, format!("input {} {:.4}{note}", var.name, trace.clamped_inputs[i]))?;
        for (mf, d) in var.mfs.iter().zip(&trace.degrees[i]) {
            w(out, format!("  {} {:.4}", mf.name, d))?;
        }
    }
    for (k, s) in trace.rule_strengths.iter().enumerate() {
        w(out, format!("rule {} {:.4}", k + 1, s))?;
    }
    Ok(())
}

fn parse(a: ParseArgs, out: &mut impl Write) -> Outcome {
    let path = a.fis.as_deref();
    let source = source_name(path);
    let text = read_fis_text(path)?;
    let parsed = parse_fis(&text).map_err(|issues| {
        let errors = issues.iter().filter(|i| i.is_error()).count();
        let msg = render_issues(&source, &issues);
        Failure::Data(format!("{errors} error(s)\n{}", msg.trim_end()))
    })?;
    let fis = &parsed.fis;
    let mut s = render_issues(&source, &parsed.warnings);
    let _ = writeln!(
        s,
        "{source}: ok: '{}' with {} inputs, {} outputs, {} rules, {} warning(s)",
        fis.name,
        fis.inputs.len(),
        fis.outputs.len(),
        fis.rules.len(),
        parsed.warnings.len()
    );
    if a.serialize {
        s.push_str(&serialize_fis(fis));
    }
    out.write_all(s.as_bytes()).map_err(data)
}

fn axis_or(given: Option<AxisSpec>, default: AxisSpec) -> AxisSpec {
    given.unwrap_or(default)
}

fn sweep(a: SweepArgs, out: &mut impl Write) -> Outcome {
    check_resolution(a.fis.resolution)?;
    if !a.threshold.is_finite() {
        return Err(Failure::Usage(format!("threshold must be finite, got {}", a.threshold)));
    }
    let [de, dw, do_] = if a.fine { FINE_AXES } else { COARSE_AXES };
    let grid = build_grid(axis_or(a.env, de), axis_or(a.win, dw), axis_or(a.overlap, do_))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let fis = load_fis(&a.fis)?;
    let surface = evaluate_surface(&fis, &grid, a.fis.resolution).map_err(data)?;

    if let Some(path) = &a.out {
        let file = File::create(path).map_err(|e| Failure::Data(format!("cannot create {}: {e}", path.display())))?;
        let writer = BufWriter::new(file);
        match a.format {
            SurfaceFormat::Csv => write_csv(&surface, writer),
            SurfaceFormat::Json => write_json(&surface, writer),
        }
        .map_err(data)?;
    }

    let best = argmax(&surface).map_err(data)?;
    let mut s = String::new();
    let _ = writeln!(s, "points {}", surface.len());
    let _ = writeln!(
        s,
        "argmax env={:.4} win={:.4} overlap={:.4} accuracy={:.4}",
        best.env, best.win, best.overlap, best.accuracy
    );
    match feasible_region(&surface, a.threshold) {
        Ok(r) => {
            let _ = writeln!(
                s,
                "region >= {:.4}: env [{:.4}, {:.4}] win [{:.4}, {:.4}] overlap [{:.4}, {:.4}] ({} points)",
                r.threshold,
                r.env_range.0,
                r.env_range.1,
                r.win_range.0,
                r.win_range.1,
                r.overlap_range.0,
                r.overlap_range.1,
                r.points
            );
        }
        Err(asr_fis::Error::EmptyRegion { threshold }) => {
            let _ = writeln!(s, "region >= {threshold:.4}: empty");
        }
        Err(e) => return Err(data(e)),
    }
    if let Some(path) = &a.out {
        let _ = writeln!(s, "wrote {}", path.display());
    }
    out.write_all(s.as_bytes()).map_err(data)
}

fn frame(a: FrameArgs, out: &mut impl Write) -> Outcome {
    let spec = SignalSpec::new(a.rate, a.length).map_err(|e| Failure::Usage(e.to_string()))?;
    let plan = frame_plan(a.length, a.window, a.overlap).map_err(|e| Failure::Usage(e.to_string()))?;
    let literal = frame_size_literal(a.length, a.window, a.overlap).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut s = String::new();
    let _ = writeln!(s, "rate_hz {}", spec.sampling_rate);
    let _ = writeln!(s, "length {}", plan.length);
    let _ = writeln!(s, "duration_s {:.4}", spec.duration_secs());
    let _ = writeln!(s, "window {}", plan.window);
    let _ = writeln!(
        s,
        "window_ms {:.4}",
        plan.window as f64 * 1000.0 / f64::from(spec.sampling_rate)
    );
    let _ = writeln!(s, "overlap_pct {:.4}", plan.overlap_pct);
    let _ = writeln!(s, "hop {}", plan.hop);
    let _ = writeln!(s, "frames {}", plan.frame_count);
    let _ = writeln!(s, "covered {}", plan.covered_len());
    let _ = writeln!(s, "frame_size {:.4}", literal.value());
    out.write_all(s.as_bytes()).map_err(data)
}

fn tables(a: TablesArgs, out: &mut impl Write) -> Outcome {
    let records = match (&a.csv, a.table) {
        (Some(path), _) => load_table_csv(path).map_err(data)?,
        (None, id) => read_records(table_fixture(id.unwrap_or(1)).as_bytes()).map_err(data)?,
    };
    let by = match a.group_by {
        Grouping::Auto => GroupBy::Auto,
        Grouping::Window => GroupBy::Window,
        Grouping::Digit => GroupBy::Digit,
    };
    for w in lint_records(&records) {
        eprintln!("warning: {w}");
    }
    let mut reports: Vec<ClaimReport> = Vec::new();
    if matches!(a.check, Check::SnrPeak | Check::All) {
        reports.push(snr_peak_check(&records, by));
    }
    if matches!(a.check, Check::AccArgmax | Check::All) {
        reports.push(accuracy_argmax_report(&records, by));
    }

    match a.format {
        ReportFormat::Text => {
            for r in &reports {
                write!(out, "{r}").map_err(data)?;
            }
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &reports).map_err(data)?;
            writeln!(out).map_err(data)?;
        }
    }
    if a.strict && reports.iter().any(|r| r.failures().next().is_some()) {
        return Err(Failure::Claim);
    }
    Ok(())
}
