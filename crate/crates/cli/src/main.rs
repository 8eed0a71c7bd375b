//! `rfemu`: compile scenes into configuration packets, run the cycle-level
//! emulator, and analyze the captured streams.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rfemu_core::controlpath::DelayMode;
use rfemu_core::harness::{
    compile_scene, detect_peaks, matched_filter, peak_ranges, range_metrics, read_expected_ranges, reference_chirp,
    run_emulation, scenarios_needed, widen, write_correlation_csv, write_iq_csv, pulse_interval, pulse_len, Preset,
    RangeMode, RangeOptions, RunArtifact, RunOptions, DEFAULT_MIN_SEPARATION, DEFAULT_THRESHOLD,
};
use rfemu_core::numerics::minif10_table_csv;
use rfemu_core::scenario::{decode_stream, encode_stream, Scene};

#[derive(Parser)]
#[command(name = "rfemu", version, about = "Cycle-level RF channel emulation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scene into a binary stream of configuration packets.
    CompileScene(CompileArgs),
    /// Run the emulator and write a run artifact.
    Run(RunArgs),
    /// Matched-filter a run's capture and report detected ranges.
    Analyze(AnalyzeArgs),
    /// Print every 10-bit minifloat pattern and its value as CSV.
    DumpMinif10,
}

#[derive(Args)]
struct CompileArgs {
    /// Scene file (TOML).
    scene: PathBuf,
    #[arg(long, default_value = "asic4")]
    preset: String,
    /// Number of frames (one packet per frame).
    #[arg(long, default_value_t = 1)]
    frames: usize,
    /// Suppress links closer than the minimum range instead of failing.
    #[arg(long)]
    lenient: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, default_value = "asic4")]
    preset: String,
    #[arg(long)]
    cycles: u64,
    /// Packets from `compile-scene`; compiled on the fly when absent.
    #[arg(long)]
    scps: Option<PathBuf>,
    #[arg(long)]
    lenient: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Run artifact (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Also write each capture as `<prefix>-<node>.csv`.
    #[arg(long)]
    iq_csv: Option<PathBuf>,
    /// Also write per-node controller instrumentation (JSON).
    #[arg(long)]
    instrumentation: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    OneWay,
    RoundTrip,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    run: PathBuf,
    /// Expected ranges in meters (one per line or last CSV column).
    #[arg(long)]
    expected: Option<PathBuf>,
    /// Receiving node id; defaults to the first capture.
    #[arg(long)]
    node: Option<u32>,
    #[arg(long, value_enum, default_value = "one-way")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = DEFAULT_MIN_SEPARATION)]
    min_separation: usize,
    /// Range gate in meters: `--gate MIN MAX`.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    gate: Option<Vec<f64>>,
    /// First and last+1 correlation lag to search.
    #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
    lags: Option<Vec<usize>>,
    /// Range report (JSON); printed to stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Correlation magnitude series (CSV).
    #[arg(long)]
    correlation: Option<PathBuf>,
    /// Fail on any missed expectation or error above `--max-error-pct`.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 1.0)]
    max_error_pct: f64,
}

fn read_scene(path: &Path) -> Result<Scene> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Scene::from_toml_str(&text)?)
}

fn mode(lenient: bool) -> DelayMode {
    if lenient {
        DelayMode::Lenient
    } else {
        DelayMode::Strict
    }
}

fn compile(args: CompileArgs) -> Result<()> {
    let scene = read_scene(&args.scene)?;
    let preset = Preset::by_name(&args.preset)?;
    let solved = compile_scene(&scene, &preset, mode(args.lenient), args.frames)?;
    let packets: Vec<_> = solved.into_iter().map(|s| s.scp).collect();
    fs::write(&args.output, encode_stream(&packets)).with_context(|| format!("writing {}", args.output.display()))?;
    eprintln!("wrote {} packets to {}", packets.len(), args.output.display());
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let scene = read_scene(&args.scene)?;
    let preset = Preset::by_name(&args.preset)?;
    let mode = mode(args.lenient);
    let scps = match &args.scps {
        Some(p) => decode_stream(&fs::read(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => compile_scene(&scene, &preset, mode, scenarios_needed(&scene, args.cycles).max(1))?
            .into_iter()
            .map(|s| s.scp)
            .collect(),
    };
    let run = run_emulation(&scene, &preset, &scps, args.cycles, &RunOptions { mode, threads: args.threads })?;
    let artifact = RunArtifact::from_run(&run, pulse_interval(&scene.waveform), pulse_len(&scene.waveform));
    fs::write(&args.out, artifact.to_json()?).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(prefix) = &args.iq_csv {
        for cap in &run.captures {
            let path = PathBuf::from(format!("{}-{}.csv", prefix.display(), cap.node));
            let mut f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_iq_csv(&mut f, &cap.samples)?;
        }
    }
    if let Some(path) = &args.instrumentation {
        fs::write(path, serde_json::to_string_pretty(&run.nodes)?)?;
    }
    let total = run.total_instrumentation();
    eprintln!(
        "{} cycles on {}: {} captures, {} collisions, {} port conflicts, {} prefetch underflows",
        run.n_cycles,
        run.preset,
        run.captures.len(),
        total.collisions,
        total.port_conflicts,
        total.prefetch_underflows
    );
    Ok(())
}

/// Returns whether `--check` passed (always true without it).
fn analyze(args: AnalyzeArgs) -> Result<bool> {
    let text = fs::read_to_string(&args.run).with_context(|| format!("reading {}", args.run.display()))?;
    let artifact = RunArtifact::from_json(&text)?;
    let capture = match args.node {
        Some(id) => artifact.captures.iter().find(|c| c.node == id).with_context(|| format!("no capture for node {id}"))?,
        None => artifact.captures.first().context("run has no captures")?,
    };
    if !(args.threshold > 0.0 && args.threshold <= 1.0) {
        bail!("threshold must be in (0, 1]");
    }
    let corr = matched_filter(&widen(&capture.samples()), &widen(&reference_chirp(artifact.chirp_len)));
    if let Some(path) = &args.correlation {
        let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_correlation_csv(&mut f, &corr)?;
    }
    let (from, to) = match args.lags.as_deref() {
        Some([a, b]) => (*a.min(&corr.len()), *b.min(&corr.len())),
        _ => (0, corr.len()),
    };
    if from >= to {
        bail!("empty lag window {from}..{to}");
    }
    let mut peaks = detect_peaks(&corr[from..to], args.threshold, args.min_separation);
    for p in &mut peaks {
        p.lag += from;
        p.position += from as f64;
    }
    let opts = RangeOptions {
        sample_rate: artifact.sample_rate,
        mode: match args.mode {
            ModeArg::OneWay => RangeMode::OneWay,
            ModeArg::RoundTrip => RangeMode::RoundTrip,
        },
        pri: artifact.pri,
        gate: args.gate.as_deref().map(|g| (g[0], g[1])),
    };
    let expected = match &args.expected {
        Some(p) => read_expected_ranges(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => Vec::new(),
    };
    let report = range_metrics(&peak_ranges(&peaks, &opts), &expected);
    let json = serde_json::to_string_pretty(&report)?;
    match &args.report {
        Some(p) => fs::write(p, json)?,
        None => println!("{json}"),
    }
    let worst = report.per_peak_error_pct.iter().flatten().copied().fold(0.0, f64::max);
    let ok = report.misses == 0 && worst <= args.max_error_pct;
    if args.check && !ok {
        eprintln!("check failed: {} missed, worst error {worst:.4}% (limit {}%)", report.misses, args.max_error_pct);
    }
    Ok(!args.check || ok)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::CompileScene(a) => compile(a)?,
        Command::Run(a) => run(a)?,
        Command::Analyze(a) => {
            if !analyze(a)? {
                return Ok(ExitCode::from(2));
            }
        }
        Command::DumpMinif10 => print!("{}", minif10_table_csv()),
    }
    Ok(ExitCode::SUCCESS)
}
