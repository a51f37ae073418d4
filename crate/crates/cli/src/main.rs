use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hollowkit_cli::{json, run, Command, Overrides, Scene, Verdict};

/// Certify critical families of convex sets and their hollows.
#[derive(Debug, Parser)]
#[command(name = "hollowkit", version)]
struct Cli {
    command: Command,
    /// Scene file (JSON, schema "hollowkit/1").
    scene: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
    /// Grid cell size for certify and render.
    #[arg(long)]
    resolution: Option<f64>,
    /// Initial subdivision depth for solve-klee.
    #[arg(long)]
    depth: Option<usize>,
    /// Random restarts for the uniqueness probe.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write result files into this directory instead of printing them.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time per stage in the result.
    #[arg(long)]
    timings: bool,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HOLLOWKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("HOLLOWKIT_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
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
    match execute(&cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(2),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<Verdict, String> {
    configure_threads()?;
    let scene = Scene::load(&cli.scene).map_err(|e| e.to_string())?;
    let overrides = Overrides {
        tol: cli.tol,
        resolution: cli.resolution,
        depth: cli.depth,
        restarts: cli.restarts,
        seed: cli.seed,
        timings: cli.timings,
    };
    let output = run(cli.command, &scene, &overrides).map_err(|e| e.to_string())?;
    for w in &output.result.warnings {
        eprintln!("warning: {w}");
    }
    let document = json::to_string_pretty(&output.result);
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            let stem = cli
                .scene
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "scene".into());
            let result_path = dir.join(format!("{stem}.{}.json", cli.command.name()));
            std::fs::write(&result_path, document).map_err(|e| format!("{}: {e}", result_path.display()))?;
            println!("{}", output.result.summary);
            println!("wrote {}", result_path.display());
            if let Some(svg) = &output.svg {
                let svg_path = dir.join(format!("{stem}.svg"));
                std::fs::write(&svg_path, svg).map_err(|e| format!("{}: {e}", svg_path.display()))?;
                println!("wrote {}", svg_path.display());
            }
        }
        None => match &output.svg {
            Some(svg) => print!("{svg}"),
            None => print!("{document}"),
        },
    }
    Ok(output.result.verdict)
}
