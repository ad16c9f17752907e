use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ncsp::builtin::Builtin;
use ncsp::expr::Problem;
use ncsp::glb::{min_dims, run_workers, Backend, GlbConfig};
use ncsp::parse::parse_problem;
use ncsp::report::{emit_paving, RunReport};

#[derive(Parser)]
#[command(name = "ncsp", version, about = "Parallel branch-and-prune solver for numerical constraint problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an eps-paving of a problem's solution set.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Threads,
    Sim,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// `builtin:<eco[N]|disks|sphere-plane[N]>` or `file:<path>`
    target: String,
    /// Boxes narrower than this are not split further.
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Preset configuration 1..7; explicit flags override its values.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    config: Option<u8>,
    /// Slice duration in milliseconds [default: 1]
    #[arg(long)]
    slice_ms: Option<f64>,
    /// Random steal attempts w [default: 0]
    #[arg(long)]
    steal_w: Option<u32>,
    /// Lifeline graph side l [default: 2]
    #[arg(long)]
    lifeline_l: Option<usize>,
    /// Lifeline graph dimension z [default: smallest with l^z >= workers]
    #[arg(long)]
    lifeline_z: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "threads")]
    backend: BackendArg,
    /// Write per-worker statistics and the depth histogram as CSV.
    #[arg(long)]
    stats_csv: Option<PathBuf>,
    /// Write the paving, one tagged box per line.
    #[arg(long)]
    paving: Option<PathBuf>,
}

fn load(target: &str) -> Result<(String, Problem)> {
    if let Some(name) = target.strip_prefix("builtin:") {
        let b: Builtin = name.parse()?;
        Ok((b.name(), b.problem()))
    } else if let Some(path) = target.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let p = parse_problem(&text).with_context(|| format!("parsing {path}"))?;
        Ok((path.to_string(), p))
    } else {
        bail!("target must start with `builtin:` or `file:`, got `{target}`")
    }
}

fn config(args: &SolveArgs) -> Result<GlbConfig> {
    if args.workers == 0 {
        bail!("--workers must be at least 1");
    }
    let mut cfg = match args.config {
        Some(n) => GlbConfig::preset(n, args.workers)?,
        None => GlbConfig::new(args.workers),
    };
    if let Some(ms) = args.slice_ms {
        if !(ms > 0.0 && ms.is_finite()) {
            bail!("--slice-ms must be positive");
        }
        cfg.slice = Duration::from_secs_f64(ms / 1000.0);
    }
    if let Some(w) = args.steal_w {
        cfg.random_steals = w;
    }
    if let Some(l) = args.lifeline_l {
        if l < 2 {
            bail!("--lifeline-l must be at least 2");
        }
        cfg.lifeline_side = l;
        cfg.lifeline_dims = min_dims(l, args.workers);
    }
    if let Some(z) = args.lifeline_z {
        cfg.lifeline_dims = z;
    }
    cfg.seed = args.seed;
    cfg.validate()?;
    Ok(cfg)
}

fn solve(args: SolveArgs) -> Result<()> {
    if !(args.eps > 0.0 && args.eps.is_finite()) {
        bail!("--eps must be a positive number");
    }
    let (name, problem) = load(&args.target)?;
    let cfg = config(&args)?;
    let backend = match args.backend {
        BackendArg::Threads => Backend::Threads,
        BackendArg::Sim => Backend::simulation(),
    };
    let outcome = run_workers(&problem, args.eps, &cfg, backend)?;
    let report = RunReport::new(name, args.eps, cfg, backend, &outcome);
    println!("{report}");
    if let Some(path) = &args.stats_csv {
        report.emit_stats_csv(path).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.paving {
        emit_paving(&outcome.paving(), path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Solve(args) => solve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
