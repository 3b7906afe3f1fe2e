use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matcolor::harness::commands::{self, Output, Status};
use matcolor::harness::io::{ColoringFile, InstanceFile};
use matcolor::harness::oracle::{CHI_BUDGET, COVLP_BUDGET};
use matcolor::rational::parse_q;
use matcolor::{Error, Result, Q};

#[derive(Parser)]
#[command(name = "matcolor", version, about = "Coloring the intersection of matroids")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Print trace lines to stderr.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic number of each matroid, with an optimal coloring.
    Chi { instance: PathBuf },
    /// Color the intersection of the first `k` matroids.
    Color {
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Peel common independent sets off a two-matroid instance.
    Fpras {
        instance: PathBuf,
        #[arg(long)]
        epsilon: String,
        /// Allow epsilon above the safe limit.
        #[arg(long)]
        unsafe_epsilon: bool,
    },
    /// Peeling or the pipeline, whichever the size threshold allows.
    Wrapper {
        instance: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
    /// Check a coloring file against an instance.
    Verify { instance: PathBuf, coloring: PathBuf },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Write a point as a convex combination of common independent sets.
    Decompose {
        instance: PathBuf,
        /// Decompose `alpha` times the all-ones vector.
        #[arg(long)]
        alpha: Option<String>,
        /// Explicit point as `label=value,label=value`.
        #[arg(long)]
        point: Option<String>,
    },
    /// Monte Carlo check of swap rounding on `alpha` times the all-ones vector.
    Swapround {
        instance: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        trials: usize,
        /// Extra tail target as comma-separated labels; repeatable.
        #[arg(long = "target")]
        targets: Vec<String>,
        /// Print one transcript line per trial instead of the report.
        #[arg(long)]
        transcripts: bool,
    },
    /// Exhaustive oracles for small instances.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Rows of `r` bases of GF(p)^r, with the row partition.
    Rota {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Random matroids over `n` shared elements, one per kind.
    Random {
        #[arg(long)]
        n: usize,
        /// `graphic:V`, `linear:P:D`, `partition:B`, `uniform:R` or `free`.
        #[arg(long = "kind", required = true)]
        kinds: Vec<String>,
    },
}

#[derive(Subcommand)]
enum OracleKind {
    /// Exact chromatic number of the intersection.
    ChiInt {
        instance: PathBuf,
        #[arg(long, default_value_t = CHI_BUDGET)]
        budget: usize,
    },
    /// Optimum of the covering LP over common independent sets.
    Covlp {
        instance: PathBuf,
        #[arg(long, default_value_t = COVLP_BUDGET)]
        budget: usize,
    },
}

fn load(path: &Path) -> Result<InstanceFile> {
    InstanceFile::load(path)
}

fn rational(s: &str) -> Result<Q> {
    parse_q(s)
}

fn point(s: &str) -> Result<Vec<(String, Q)>> {
    s.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected label=value, got {kv:?}")))?;
            Ok((k.trim().to_string(), parse_q(v.trim())?))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Output> {
    let seed = cli.seed;
    match &cli.command {
        Command::Chi { instance } => commands::chi(&load(instance)?),
        Command::Color { instance, k } => commands::color(&load(instance)?, *k),
        Command::Fpras { instance, epsilon, unsafe_epsilon } => {
            commands::fpras(&load(instance)?, &rational(epsilon)?, *unsafe_epsilon, seed)
        }
        Command::Wrapper { instance, epsilon, repetitions } => {
            commands::wrapper(&load(instance)?, &rational(epsilon)?, seed, *repetitions)
        }
        Command::Verify { instance, coloring } => {
            let c: ColoringFile = serde_json::from_str(&std::fs::read_to_string(coloring)?)?;
            commands::verify(&load(instance)?, &c)
        }
        Command::Gen { kind: GenKind::Rota { r, p } } => commands::gen_rota_cmd(*r, *p, seed),
        Command::Gen { kind: GenKind::Random { n, kinds } } => commands::gen_random_cmd(kinds, *n, seed),
        Command::Decompose { instance, alpha, point: pt } => {
            let alpha = alpha.as_deref().map(rational).transpose()?;
            let pt = pt.as_deref().map(point).transpose()?;
            commands::decompose(&load(instance)?, alpha.as_ref(), pt.as_deref())
        }
        Command::Swapround { instance, alpha, gamma, trials, targets, transcripts } => {
            let f = load(instance)?;
            let (alpha, gamma) = (rational(alpha)?, rational(gamma)?);
            if *transcripts {
                let lines = commands::swapround_transcripts(&f, &alpha, &gamma, *trials, seed)?;
                let json = serde_json::Value::Array(
                    lines.iter().map(|l| serde_json::from_str(l)).collect::<std::result::Result<_, _>>()?,
                );
                return Ok(Output { json, status: Status::Pass, trace: lines });
            }
            let targets: Vec<Vec<String>> =
                targets.iter().map(|t| t.split(',').map(|l| l.trim().to_string()).collect()).collect();
            commands::swapround(&f, &alpha, &gamma, *trials, &targets, seed)
        }
        Command::Oracle { kind: OracleKind::ChiInt { instance, budget } } => {
            commands::oracle_chi_int(&load(instance)?, *budget)
        }
        Command::Oracle { kind: OracleKind::Covlp { instance, budget } } => {
            commands::oracle_covlp(&load(instance)?, *budget)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli).unwrap_or_else(|e| Output::from_error(&e));
    if cli.trace {
        for line in &out.trace {
            eprintln!("{line}");
        }
    }
    let text = out.render();
    print!("{text}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(Status::Fail as u8);
        }
    }
    ExitCode::from(out.status as u8)
}
