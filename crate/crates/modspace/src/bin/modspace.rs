//! Thin command-line front end. The examples/ directory is the richer entry
//! point; this binary covers scripted use: evaluate one norm, run one named
//! experiment, or generate one signal file.
//!
//! Exit codes: 0 success, 1 an enforced experiment assertion failed,
//! 2 i/o or file format trouble, 3 bad parameters.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modspace::error::Error;
use modspace::experiments::{gen_signal, run_preset, ExperimentConfig, PRESETS};
use modspace::io::{read_signal, write_signal};
use modspace::norms::{Exponent, MixedNormParams, NormMode};
use modspace::partition::PartitionKind;
use modspace::probe::SpecRecipe;
use modspace::Grid;

#[derive(Parser)]
#[command(
    name = "modspace",
    version,
    about = "Time-frequency norms, multiplier probes and growth experiments on cyclic grids",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a norm of a signal stored as JSON
    Norm(NormArgs),
    /// Run a named experiment preset and print its assertion lines
    Experiment(ExperimentArgs),
    /// Generate a signal and write it as JSON
    Signal(SignalArgs),
}

#[derive(Args)]
struct NormArgs {
    /// Input signal file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Which definition to evaluate: stft | blocks | gabor | lp
    #[arg(long, default_value = "blocks")]
    definition: String,
    /// Inner exponent (a number >= 1, or "inf")
    #[arg(long, default_value = "2")]
    p: Exponent,
    /// Outer exponent (ignored for lp)
    #[arg(long, default_value = "2")]
    q: Exponent,
    /// Weighting: discrete | continuum
    #[arg(long, default_value = "discrete")]
    mode: NormMode,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Preset name; see --list
    #[arg(long, required_unless_present = "list")]
    preset: Option<String>,
    /// Print the preset names and exit
    #[arg(long)]
    list: bool,
    /// Override the grid length
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Override the grid spacing
    #[arg(long = "grid-dx")]
    grid_dx: Option<f64>,
    #[arg(long)]
    p: Option<Exponent>,
    #[arg(long)]
    q: Option<Exponent>,
    #[arg(long)]
    mode: Option<NormMode>,
    #[arg(long)]
    definition: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Probe budget knob; larger means more probes and refinement steps
    #[arg(long)]
    budget: Option<usize>,
    /// Directory for the manifest and artifacts
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SignalArgs {
    /// gaussian | character | bump | noise
    #[arg(long)]
    kind: String,
    #[arg(long = "grid-n", default_value_t = 256)]
    grid_n: usize,
    #[arg(long = "grid-dx", default_value_t = 0.125)]
    grid_dx: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Centered frequency bin for the character kind
    #[arg(long, default_value_t = 0)]
    freq: i64,
    /// Output file; stdout when absent
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Format(_) => 2,
        _ => 3,
    }
}

fn check_thread_env() -> Result<(), Error> {
    match std::env::var("MODSPACE_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => match v.parse::<usize>() {
            // 0 means auto; evaluation runs sequentially either way so that
            // results stay bit-reproducible
            Ok(_) => Ok(()),
            Err(_) => Err(Error::InvalidParameter(format!(
                "MODSPACE_THREADS must be a nonnegative integer, got {v:?}"
            ))),
        },
    }
}

fn run_norm(args: &NormArgs) -> Result<(), Error> {
    let f = read_signal(&args.input)?;
    let params = MixedNormParams::new(args.p, args.q, args.mode);
    let recipe = match args.definition.as_str() {
        "stft" => SpecRecipe::MpqStft { params },
        "blocks" => SpecRecipe::MpqBlocks {
            kind: PartitionKind::Smooth,
            params,
        },
        "gabor" => SpecRecipe::MpqGabor { params },
        "lp" => SpecRecipe::Lp {
            p: args.p,
            mode: args.mode,
        },
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown definition {other:?}; expected stft|blocks|gabor|lp"
            )))
        }
    };
    let spec = recipe.compile(f.grid())?;
    let value = spec.eval_one(&f)?;
    println!("{value:.11e}");
    println!("{}", spec.label());
    Ok(())
}

fn run_experiment(args: &ExperimentArgs) -> Result<bool, Error> {
    if args.list {
        for p in PRESETS {
            println!("{p}");
        }
        return Ok(true);
    }
    let mut cfg = ExperimentConfig::new(args.preset.as_deref().expect("required by clap"));
    cfg.n = args.grid_n;
    cfg.dx = args.grid_dx;
    cfg.p = args.p;
    cfg.q = args.q;
    cfg.mode = args.mode;
    cfg.definition = args.definition.clone();
    cfg.seed = args.seed;
    cfg.budget = args.budget;
    cfg.out = args.out.clone();
    let report = run_preset(&cfg)?;
    print!("{}", report.summary_lines());
    for (k, v) in &report.values {
        println!("  {k} = {v}");
    }
    if let Some(dir) = &cfg.out {
        println!("manifest: {}", dir.join("manifest.json").display());
    }
    Ok(report.enforced_failures() == 0)
}

fn run_signal(args: &SignalArgs) -> Result<(), Error> {
    let grid = Grid::new(args.grid_n, args.grid_dx)?;
    let f = gen_signal(&args.kind, grid, args.seed, args.freq)?;
    match &args.out {
        Some(path) => write_signal(path, &f)?,
        None => print!("{}", modspace::io::signal_to_json(&f)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = check_thread_env() {
        eprintln!("error: {e}");
        return ExitCode::from(exit_for(&e));
    }
    let outcome = match &cli.cmd {
        Cmd::Norm(args) => run_norm(args).map(|()| true),
        Cmd::Experiment(args) => run_experiment(args),
        Cmd::Signal(args) => run_signal(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
