//! Command-line front end: headless rendering, script replay, fuzzing and
//! fixture generation.
//!
//! Exit codes: 0 on success, 1 for invalid flags, configs, media or
//! scripts, 2 when a script command fails during replay.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use panocmp::compositor::RenderOptions;
use panocmp::display::{Technique, VideoId};
use panocmp::fixture::{demo_markers, write_sequence, Pattern, SequenceSpec};
use panocmp::frame::Sampling;
use panocmp::fuzz::{fuzz_engine, fuzz_session};
use panocmp::io::{export_web, output_name, LoadedSession, RenderMode};
use panocmp::session::ReplayError;
use panocmp::Script;

#[derive(Parser)]
#[command(name = "panocmp", version, about = "Compare two 360° videos side by side, headless")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a script and write one PNG per requested time.
    Render(RenderArgs),
    /// Replay a script and print the resulting state as JSON.
    Replay(ReplayArgs),
    /// Run the seeded random-command session fuzz.
    Fuzz(FuzzArgs),
    /// Write synthetic test media for both videos.
    Fixture(FixtureArgs),
    /// Write the static bundle the web viewer loads.
    ExportWeb(ExportArgs),
}

#[derive(Args)]
struct RenderArgs {
    /// Session config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Interaction script; without one the initial state is rendered.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Directory for the PNGs; created if missing.
    #[arg(long)]
    out_dir: PathBuf,
    /// Comma-separated session times in seconds.
    #[arg(long, value_delimiter = ',', required_unless_present = "every", conflicts_with = "every")]
    at: Vec<f64>,
    /// Render every this many seconds from 0 through the longest clip.
    #[arg(long)]
    every: Option<f64>,
    /// canvas, vrview, equirect or minimap.
    #[arg(long, value_parser = parse_mode)]
    mode: RenderMode,
    /// nearest or bilinear.
    #[arg(long, value_parser = parse_sampling, default_value = "nearest")]
    sampling: Sampling,
    /// Video content only: no edges, minimaps or labels.
    #[arg(long)]
    plain: bool,
}

#[derive(Args)]
struct ReplayArgs {
    /// Session config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Interaction script.
    #[arg(long)]
    script: PathBuf,
    /// Session time of the printed state; defaults to the last command.
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Args)]
struct FuzzArgs {
    /// Seed of the command stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Commands per technique.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Limit the run to one technique.
    #[arg(long)]
    technique: Option<Technique>,
}

#[derive(Args)]
struct FixtureArgs {
    /// Receives a/ and b/ with frames, manifest and ROI track.
    #[arg(long)]
    out_dir: PathBuf,
    /// Frame width in pixels; must be even.
    #[arg(long, default_value_t = 256)]
    width: u32,
    /// Frames per second.
    #[arg(long, default_value_t = 1.0)]
    fps: f64,
    /// Frames per video.
    #[arg(long, default_value_t = 30)]
    count: u32,
    /// checker or solid.
    #[arg(long, value_parser = parse_pattern, default_value = "checker")]
    pattern: Pattern,
}

#[derive(Args)]
struct ExportArgs {
    /// Session config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Bundle directory; created if missing.
    #[arg(long)]
    out_dir: PathBuf,
}

fn parse_mode(s: &str) -> Result<RenderMode, String> {
    s.parse()
}

fn parse_sampling(s: &str) -> Result<Sampling, String> {
    match s.to_ascii_lowercase().as_str() {
        "nearest" => Ok(Sampling::Nearest),
        "bilinear" => Ok(Sampling::Bilinear),
        _ => Err(format!("unknown sampling {s:?}, expected nearest or bilinear")),
    }
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    match s.to_ascii_lowercase().as_str() {
        "checker" => Ok(Pattern::Checker),
        "solid" => Ok(Pattern::Solid),
        _ => Err(format!("unknown pattern {s:?}, expected checker or solid")),
    }
}

enum Failure {
    Invalid(String),
    Replay(ReplayError),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn load_script(path: Option<&Path>) -> Result<Script, Failure> {
    match path {
        None => Ok(Script::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            Script::parse(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))
        }
    }
}

fn render(args: RenderArgs) -> Result<(), Failure> {
    let session = LoadedSession::load(&args.config)?;
    let script = load_script(args.script.as_deref())?;
    let times = match args.every {
        Some(step) => {
            if !(step > 0.0 && step.is_finite()) {
                return Err(Failure::Invalid(format!("--every must be positive, got {step}")));
            }
            let end = session.manifests[0].duration().max(session.manifests[1].duration());
            let n = (end / step + 1e-9).floor() as u64;
            (0..=n).map(|i| i as f64 * step).collect()
        }
        None => args.at,
    };
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Failure::Invalid(format!("render time {t} must be non-negative")));
    }
    let mut opts = if args.plain {
        RenderOptions::plain()
    } else {
        RenderOptions::default()
    };
    opts.sampling = args.sampling;
    std::fs::create_dir_all(&args.out_dir)?;
    for t in times {
        let state = session.engine.state_at(&script, t).map_err(Failure::Replay)?;
        let frame = session.render(&state, args.mode, &opts)?;
        let path = args.out_dir.join(output_name(args.mode, t));
        frame.save_png(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn replay(args: ReplayArgs) -> Result<(), Failure> {
    let session = LoadedSession::load(&args.config)?;
    let script = load_script(Some(&args.script))?;
    let t = args.at.unwrap_or_else(|| script.end_time());
    let state = session.engine.state_at(&script, t).map_err(Failure::Replay)?;
    println!("{}", serde_json::to_string_pretty(&state)?);
    Ok(())
}

fn fuzz(args: FuzzArgs) -> Result<(), Failure> {
    let techniques = match args.technique {
        Some(t) => vec![t],
        None => Technique::ALL.to_vec(),
    };
    for t in techniques {
        let engine = fuzz_engine(t);
        let report = fuzz_session(&engine, args.seed, args.steps)?;
        println!("{t}: {}", serde_json::to_string(&report)?);
    }
    Ok(())
}

fn fixture(args: FixtureArgs) -> Result<(), Failure> {
    if args.width < 2 || args.width % 2 != 0 {
        return Err(Failure::Invalid(format!("--width must be even, got {}", args.width)));
    }
    let markers = demo_markers();
    for v in VideoId::BOTH {
        let spec = SequenceSpec::new(v, args.width, args.fps, args.count)
            .with_pattern(args.pattern)
            .with_marker(markers[v.index()]);
        let dir = args.out_dir.join(v.to_string().to_lowercase());
        let written = write_sequence(&dir, &spec)?;
        println!("{}", written.manifest.display());
    }
    Ok(())
}

fn export(args: ExportArgs) -> Result<(), Failure> {
    let session = LoadedSession::load(&args.config)?;
    std::fs::create_dir_all(&args.out_dir)?;
    export_web(&session, &args.out_dir)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Cmd::Render(a) => render(a),
        Cmd::Replay(a) => replay(a),
        Cmd::Fuzz(a) => fuzz(a),
        Cmd::Fixture(a) => fixture(a),
        Cmd::ExportWeb(a) => export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Replay(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
