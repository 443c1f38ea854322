use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kneser_choice::experiment::{
    exit_code, run, write_artifact, AdversaryConfig, BoundsParams, BuildParams, ColorRandomParams,
    Command, CoverParams, ExactChParams, ExperimentConfig, Format, GreedyParams, OutputSpec,
    TuranParams,
};
use kneser_choice::Error;

#[derive(Parser)]
#[command(
    name = "kneser",
    version,
    about = "List-coloring experiments on Kneser graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Vertices and edges of KG(n,k) or its Schrijver subgraph.
    Build {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        schrijver: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Chromatic number and choice-number bounds per (n, k).
    Bounds {
        /// Single n; shorthand for --n-min N --n-max N.
        #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
        n: Option<u32>,
        #[arg(long, requires = "n_max")]
        n_min: Option<u32>,
        #[arg(long, requires = "n_min")]
        n_max: Option<u32>,
        /// Fixed k; every k ≤ n/2 when omitted.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 3)]
        s: u32,
        /// Skip the exact choice-number column.
        #[arg(long)]
        no_exact_ch: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Minimum-element coloring.
    ColorGreedy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Random-map list coloring trials.
    ColorRandom {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1000)]
        max_iters: u64,
        #[arg(long)]
        pool_size: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Structural covers of random intersecting families.
    Cover {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        families: usize,
        #[arg(long)]
        max_family_size: Option<usize>,
        #[arg(long)]
        pad: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Minimum edge counts against the Turán-type bound.
    TuranCheck {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        q: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Lower-bound proof quantities, optionally with Monte Carlo trials.
    Adversary {
        #[arg(long)]
        n: u128,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 3)]
        s: u32,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        u: Option<u128>,
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact choice number of a small Kneser graph.
    ExactCh {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m_max: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn config(command: Command, common: Common) -> ExperimentConfig {
    ExperimentConfig {
        command,
        seed: common.seed,
        output: OutputSpec {
            path: common.out,
            format: match common.format {
                Fmt::Json => Format::Json,
                Fmt::Csv => Format::Csv,
            },
        },
    }
}

fn to_config(cmd: Cmd) -> kneser_choice::Result<ExperimentConfig> {
    Ok(match cmd {
        Cmd::Run { config } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        Cmd::Build {
            n,
            k,
            schrijver,
            common,
        } => config(Command::Build(BuildParams { n, k, schrijver }), common),
        Cmd::Bounds {
            n,
            n_min,
            n_max,
            k,
            s,
            no_exact_ch,
            common,
        } => {
            let (n_min, n_max) = match (n, n_min, n_max) {
                (Some(n), _, _) => (n, n),
                (None, Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Param("bounds needs --n or --n-min/--n-max".into())),
            };
            let p = BoundsParams {
                n_min,
                n_max,
                k,
                s,
                exact_ch: !no_exact_ch,
            };
            config(Command::Bounds(p), common)
        }
        Cmd::ColorGreedy { n, k, common } => {
            config(Command::ColorGreedy(GreedyParams { n, k }), common)
        }
        Cmd::ColorRandom {
            n,
            k,
            m,
            trials,
            max_iters,
            pool_size,
            common,
        } => {
            let p = ColorRandomParams {
                n,
                k,
                m,
                trials,
                max_iters,
                pool_size,
            };
            config(Command::ColorRandom(p), common)
        }
        Cmd::Cover {
            n,
            k,
            s,
            families,
            max_family_size,
            pad,
            common,
        } => {
            let p = CoverParams {
                n,
                k,
                s,
                family: None,
                families,
                max_family_size,
                pad,
            };
            config(Command::Cover(p), common)
        }
        Cmd::TuranCheck { n, s, q, common } => config(
            Command::TuranCheck(TuranParams {
                n,
                s,
                q,
                edges: None,
            }),
            common,
        ),
        Cmd::Adversary {
            n,
            k,
            s,
            epsilon,
            u,
            trials,
            common,
        } => {
            let p = AdversaryConfig {
                n,
                k,
                s,
                epsilon,
                u_override: u,
                trials,
            };
            config(Command::Adversary(p), common)
        }
        Cmd::ExactCh {
            n,
            k,
            m_max,
            common,
        } => config(Command::ExactCh(ExactChParams { n, k, m_max }), common),
    })
}

fn execute(cmd: Cmd) -> kneser_choice::Result<()> {
    let config = to_config(cmd)?;
    let artifact = run(&config)?;
    match write_artifact(&artifact, &config)? {
        Some(path) => eprintln!("wrote {}", path.display()),
        None => std::io::stdout()
            .write_all(&artifact.render(config.output.format))
            .map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kneser: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
