//! `arrcensus`: build discriminantal arrangements, count and catalog their
//! chambers, and classify generic arrangements from the command line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use arrcensus_core::linalg::{parse_rational_list, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{render_csv, Recorder};

#[derive(Parser)]
#[command(name = "arrcensus", version, about = "Exact census of discriminantal arrangements")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for parallel phases. Output does not depend on it.
    #[arg(long, global = true, env = "ARRCENSUS_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    /// Largest subset sum or flat lattice to attempt.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    max_subsets: u64,

    /// Largest chamber catalog to build.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_chambers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Whitney,
    Poset,
    Combinatorial,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CensusMode {
    ConcurrencyFree,
    NsFile,
}

#[derive(Args)]
pub struct NsArg {
    /// Normal system JSON file.
    #[arg(long)]
    ns: PathBuf,
}

/// A comma-separated rational vector such as `0,-2,3,1/2`.
#[derive(Clone)]
pub struct Vector(pub Vec<Rational>);

fn parse_b(text: &str) -> Result<Vector, String> {
    parse_rational_list(text).map(Vector).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random integer normal system.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Entries are drawn from [-bound, bound].
        #[arg(long, default_value_t = 10)]
        bound: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the discriminantal arrangement of a normal system.
    Disc {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Characteristic polynomial.
    Charpoly {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long, value_enum, default_value_t = Method::Poset)]
        method: Method,
    },
    /// Cone count and number of isomorphism classes.
    Count {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long, value_enum, default_value_t = Method::Poset)]
        method: Method,
    },
    /// Enumerate chambers as sign vectors with witnesses.
    Chambers {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate a translation vector b among the chambers.
    Classify {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
        b: Vector,
        /// Reuse a catalog written by `chambers --out`.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Test whether a normal system is concurrency free.
    CheckCf {
        #[command(flatten)]
        ns: NsArg,
        /// Report the smallest failing collection.
        #[arg(long)]
        witness: bool,
    },
    /// Concurrency closure of a subset collection.
    Closure {
        #[arg(long)]
        collection: PathBuf,
    },
    /// Regions of the affine arrangement a_i·x = b_i.
    Regions {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
        b: Vector,
    },
    /// Triangles of a planar arrangement.
    Signature {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
        b: Vector,
    },
    /// Compare two arrangements by their vertex orders.
    Iso {
        #[command(flatten)]
        ns: NsArg,
        #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
        b1: Vector,
        #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
        b2: Vector,
    },
    /// Cross-check a chamber catalog against the vertex order oracle.
    CatalogVerify {
        #[command(flatten)]
        ns: NsArg,
    },
    /// Polynomial, cones and classes for a family of sizes.
    Census {
        /// Comma-separated list of n.
        #[arg(long, value_delimiter = ',', required_unless_present = "ns")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = CensusMode::ConcurrencyFree)]
        mode: CensusMode,
        /// Normal system for `--mode ns-file`.
        #[arg(long)]
        ns: Option<PathBuf>,
    },
}

/// Size guards shared by every command.
pub struct Limits {
    pub max_subsets: u64,
    pub max_chambers: usize,
}

fn dispatch(command: Command, limits: &Limits, rec: &mut Recorder) -> anyhow::Result<(String, report::Outcome)> {
    use commands as c;
    Ok(match command {
        Command::Gen { n, m, seed, bound, out } => ("gen".into(), c::gen(rec, n, m, seed, bound, out)?),
        Command::Disc { ns, out } => ("disc".into(), c::disc(rec, &ns.ns, out)?),
        Command::Charpoly { ns, method } => ("charpoly".into(), c::charpoly(rec, limits, &ns.ns, method)?),
        Command::Count { ns, method } => ("count".into(), c::count(rec, limits, &ns.ns, method)?),
        Command::Chambers { ns, out } => ("chambers".into(), c::chambers(rec, limits, &ns.ns, out)?),
        Command::Classify { ns, b, catalog } => {
            ("classify".into(), c::classify(rec, limits, &ns.ns, b.0, catalog)?)
        }
        Command::CheckCf { ns, witness } => ("check-cf".into(), c::check_cf(rec, &ns.ns, witness)?),
        Command::Closure { collection } => ("closure".into(), c::closure(rec, &collection)?),
        Command::Regions { ns, b } => ("regions".into(), c::regions(rec, &ns.ns, b.0)?),
        Command::Signature { ns, b } => ("signature".into(), c::signature(rec, &ns.ns, b.0)?),
        Command::Iso { ns, b1, b2 } => ("iso".into(), c::iso(rec, &ns.ns, b1.0, b2.0)?),
        Command::CatalogVerify { ns } => ("catalog-verify".into(), c::catalog_verify(rec, limits, &ns.ns)?),
        Command::Census { n, m, mode, ns } => ("census".into(), c::census(rec, limits, n, m, mode, ns)?),
    })
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<arrcensus_core::Error>() {
        e.kind()
    } else if err.downcast_ref::<serde_json::Error>().is_some() {
        "invalid_input"
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        "io"
    } else {
        "error"
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k as usize)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let limits = Limits {
        max_subsets: cli.max_subsets,
        max_chambers: cli.max_chambers,
    };
    let mut rec = Recorder::new();
    let (name, outcome) = dispatch(cli.command, &limits, &mut rec)?;
    match cli.format {
        Format::Json => {
            let report = rec.finish(&name, outcome.payload);
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Format::Text => print!("{}", outcome.text),
        Format::Csv => print!("{}", render_csv(&outcome.table)?),
    }
    Ok(match outcome.failed {
        None => ExitCode::SUCCESS,
        Some(message) => {
            eprintln!("{}", error_json("verification_failed", &message));
            ExitCode::from(1)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let message = format!("{err:#}");
            eprintln!("{}", error_json(error_kind(&err), &message));
            ExitCode::from(1)
        }
    }
}
