//! `cayden`: diameters, minimum distance diagrams, and density bounds for
//! Cayley digraphs of finite Abelian groups.

mod commands;
mod report;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use cayden::{Error, SearchOptions, Symmetry};
use clap::{Args, Parser, Subcommand};

use report::Format;

/// Exit status for a check that ran and came out negative.
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONSISTENT: u8 = 3;
pub const EXIT_REFUTED: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "cayden", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Worker threads for κ searches (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value = "units", value_parser = parse_symmetry)]
    pub symmetry: Symmetry,
    /// Never cut a κ search at the lower bound.
    #[arg(long, global = true)]
    pub no_prune: bool,
    /// Allow the conjectural degree-3 bound to cut κ searches.
    #[arg(long, global = true)]
    pub prune_conjectural: bool,
    /// κ cache file; defaults to $CAYDEN_KAPPA_CACHE.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

impl Global {
    pub fn search(&self) -> SearchOptions {
        let defaults = SearchOptions::default();
        SearchOptions {
            jobs: self.jobs.unwrap_or(defaults.jobs),
            symmetry: self.symmetry,
            prune: !self.no_prune,
            prune_conjectural: self.prune_conjectural,
        }
    }
}

fn parse_symmetry(s: &str) -> Result<Symmetry, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form with unimodular witnesses.
    Snf { matrix: String },
    /// Whether the generator lifts are proper, optionally against a given
    /// tessellation matrix.
    Proper {
        digraph: String,
        #[arg(long)]
        tessellation: Option<String>,
    },
    /// Diameter by BFS.
    Diameter { digraph: String },
    /// Solid density against the global density constant.
    Density { digraph: String },
    /// Minimum distance diagrams.
    #[command(subcommand)]
    Mdd(MddCommand),
    /// Dilate a digraph, or an MDD file with `--mdd`.
    Dilate {
        digraph: Option<String>,
        #[arg(short, long)]
        m: u64,
        #[arg(long, conflicts_with = "digraph")]
        mdd: Option<PathBuf>,
        /// Refuse lifts that are not proper.
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lower bound ℓ(d, n), or the largest order N(d, k) for diameter k.
    Bound {
        #[arg(short)]
        d: u32,
        #[arg(short, required_unless_present = "k")]
        n: Option<u64>,
        #[arg(short, conflicts_with = "n")]
        k: Option<u64>,
    },
    /// Tightness and the tightness coefficient.
    #[command(subcommand)]
    Tight(TightCommand),
    /// κ(d, n) by exhaustive search.
    Kappa {
        #[arg(short)]
        d: u32,
        #[arg(short)]
        n: u64,
    },
    /// κ(d, n) - ℓ(d, n) over a range of orders.
    Gaps {
        #[arg(short)]
        d: u32,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Also write the `n,gap` CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write an SVG plot here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Dilations of the two degree-2 tight digraphs of order 72.
    Table1,
    /// Dilations of the degree-3 digraph Cay(Z_16,{1,4,5}).
    Table2,
    /// The extremal digraph mΥ_d.
    Upsilon {
        #[arg(short)]
        d: u32,
        #[arg(short, default_value_t = 1)]
        m: u64,
    },
}

#[derive(Subcommand, Debug)]
enum MddCommand {
    /// Build the lexicographically least MDD.
    Build {
        digraph: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an MDD file against its header digraph.
    Verify { file: PathBuf },
    /// SVG for degree 2, per-layer text for degree 3.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum TightCommand {
    /// t(d, Γ) = k(Γ) - ℓ(d, n).
    Digraph { digraph: String },
    /// c(d, n), by the characterization loop and by β.
    Coeff {
        #[arg(short)]
        d: u32,
        #[arg(short)]
        n: u64,
    },
    /// Whether x lies in C_d.
    Cd {
        #[arg(short)]
        d: u32,
        #[arg(short)]
        x: u64,
    },
    /// Least element x_d of C_d.
    Xd {
        #[arg(short)]
        d: u32,
    },
}

/// A check that ran to completion with a negative answer.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Two independent computations disagreed.
#[derive(Debug)]
pub struct Inconsistent(pub String);

impl std::fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Inconsistent {}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    use commands as c;
    let out = match cli.command {
        Command::Snf { matrix } => c::snf(&matrix)?,
        Command::Proper {
            digraph,
            tessellation,
        } => c::proper(&digraph, tessellation.as_deref())?,
        Command::Diameter { digraph } => c::diameter(&digraph)?,
        Command::Density { digraph } => c::density(&digraph)?,
        Command::Mdd(MddCommand::Build { digraph, output }) => {
            c::mdd_build(&digraph, output.as_deref(), g.format)?
        }
        Command::Mdd(MddCommand::Verify { file }) => c::mdd_verify(&file, g.format)?,
        Command::Mdd(MddCommand::Render { file, output }) => {
            c::mdd_render(&file, output.as_deref())?
        }
        Command::Dilate {
            digraph,
            m,
            mdd,
            strict,
            output,
        } => match (digraph, mdd) {
            (Some(d), None) => c::dilate(&d, m, strict)?,
            (None, Some(f)) => c::dilate_file(&f, m, strict, output.as_deref(), g.format)?,
            _ => return Err(Error::Parse("give a digraph literal or --mdd FILE".into()).into()),
        },
        Command::Bound { d, n, k } => c::bound(d, n, k)?,
        Command::Tight(TightCommand::Digraph { digraph }) => c::tight_digraph(&digraph)?,
        Command::Tight(TightCommand::Coeff { d, n }) => c::tight_coeff(d, n)?,
        Command::Tight(TightCommand::Cd { d, x }) => c::tight_cd(d, x)?,
        Command::Tight(TightCommand::Xd { d }) => c::tight_xd(d)?,
        Command::Kappa { d, n } => c::kappa(d, n, g)?,
        Command::Gaps {
            d,
            from,
            to,
            csv,
            svg,
        } => c::gaps(d, from, to, csv.as_deref(), svg.as_deref(), g)?,
        Command::Table1 => tables::table1()?,
        Command::Table2 => tables::table2()?,
        Command::Upsilon { d, m } => c::upsilon(d, m)?,
    };
    print!("{}", out.render(g.format)?);
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        return EXIT_CHECK_FAILED;
    }
    if err.downcast_ref::<Inconsistent>().is_some() {
        return EXIT_INCONSISTENT;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::ConjectureRefuted { .. }) => EXIT_REFUTED,
        Some(Error::BoundViolated { .. } | Error::InconsistentCache { .. }) => EXIT_INCONSISTENT,
        Some(Error::Io(_)) => EXIT_CHECK_FAILED,
        Some(_) => EXIT_USAGE,
        None if err.downcast_ref::<std::io::Error>().is_some() => EXIT_CHECK_FAILED,
        None => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if let Some(Error::ConjectureRefuted { witness, detail }) = err.downcast_ref::<Error>()
            {
                let payload = serde_json::json!({
                    "event": "conjecture-refuted",
                    "detail": detail,
                    "witness": serde_json::from_str::<serde_json::Value>(witness)
                        .unwrap_or_else(|_| witness.clone().into()),
                });
                println!("{payload}");
            }
            eprintln!("cayden: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
